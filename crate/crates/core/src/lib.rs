//! Discrimination of quantum processes as conic programs over Choi matrices.
//!
//! Given a finite collection of candidate processes (channels, multi-step
//! combs, states), this crate builds the convex program whose variable is a
//! quantum tester, solves primal and dual forms with an in-repo
//! operator-splitting SDP engine, certifies optimality from the dual
//! certificate, exploits finite-group symmetry by twirling, and handles
//! minimax strategies over unknown priors. A dedicated module covers the
//! analytically solvable family of cyclic unital qubit channels, used to
//! cross-check the generic pipeline.
//!
//! Module map:
//! - [`herm`] / [`eig`]: dense Hermitian linear algebra (partial traces,
//!   Kronecker products, Jacobi eigendecomposition, PSD projection).
//! - [`choi`]: processes, combs and testers in Choi form, with validation.
//! - [`problems`]: canonical problem builders (minimum-error, inconclusive,
//!   unambiguous, Neyman-Pearson, change point, channel comparison).
//! - [`solver`] / [`compile`]: standard-form conic programs, the ADMM engine,
//!   and the primal/dual compilations.
//! - [`certify`]: support-function evaluators, complementary-slackness
//!   residuals, dual reconstruction and the entangled-tester criterion.
//! - [`symmetry`]: finite group actions, symmetry checks, twirling,
//!   irreducibility tests.
//! - [`minimax`]: worst-case-prior strategies via the epigraph form.
//! - [`unital`]: the closed-form pipeline for cyclic unital qubit channels.

pub mod certify;
pub mod choi;
pub mod cmatrix;
pub mod compile;
pub mod eig;
pub mod error;
pub mod herm;
pub mod minimax;
pub mod problems;
pub mod solver;
pub mod symmetry;
pub mod unital;

pub use cmatrix::ComplexMatrix;
pub use error::{Error, Result};
pub use herm::{HermitianMatrix, SystemLayout};

pub type Complex64 = num_complex::Complex<f64>;
