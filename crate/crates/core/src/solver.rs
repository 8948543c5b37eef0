//! Standard-form conic programs and a deterministic ADMM engine.
//!
//! A program holds real-vectorized variable blocks (PSD-cone Hermitian
//! blocks, free Hermitian blocks, nonnegative scalars), one affine equality
//! operator `A x = b`, and a linear objective. Hermitian `d x d` blocks are
//! vectorized isometrically (diagonal entries as-is, off-diagonal real/imag
//! pairs scaled by sqrt(2)), so `<X, Y> = Tr(XY)` is the Euclidean dot
//! product and the eigenvalue clamp is the exact cone projection in vector
//! coordinates.
//!
//! The solve alternates projection onto the affine subspace (through a
//! precomputed dense Cholesky factorization of `A Aᵀ`) with the per-block
//! cone projection. Runs are single-threaded and bit-deterministic for fixed
//! inputs and options.

use num_complex::Complex64;

use crate::eig::psd_project;
use crate::error::{Error, Result};
use crate::herm::HermitianMatrix;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Variable block of a standard-form program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Hermitian `dim x dim` block constrained to the PSD cone.
    Psd { dim: usize },
    /// Hermitian `dim x dim` block, unconstrained.
    FreeHerm { dim: usize },
    /// `len` unconstrained scalars.
    FreeScalar { len: usize },
    /// `len` nonnegative scalars.
    NonNeg { len: usize },
}

impl BlockKind {
    pub fn vec_len(&self) -> usize {
        match *self {
            BlockKind::Psd { dim } | BlockKind::FreeHerm { dim } => dim * dim,
            BlockKind::FreeScalar { len } | BlockKind::NonNeg { len } => len,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Isometric real vectorization of a Hermitian matrix.
pub fn vec_herm(h: &HermitianMatrix) -> Vec<f64> {
    let d = h.dim();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in i..d {
            if i == j {
                out.push(h.get(i, i).re);
            } else {
                let v = h.get(i, j);
                out.push(SQRT2 * v.re);
                out.push(SQRT2 * v.im);
            }
        }
    }
    out
}

/// Inverse of [`vec_herm`].
pub fn unvec_herm(dim: usize, v: &[f64]) -> HermitianMatrix {
    debug_assert_eq!(v.len(), dim * dim);
    let mut m = HermitianMatrix::zeros(dim);
    let mut k = 0;
    for i in 0..dim {
        for j in i..dim {
            if i == j {
                m.set_sym(i, i, Complex64::new(v[k], 0.0));
                k += 1;
            } else {
                m.set_sym(i, j, Complex64::new(v[k] / SQRT2, v[k + 1] / SQRT2));
                k += 2;
            }
        }
    }
    m
}

/// Hermitian basis element matching coordinate `k` of the vectorization.
pub fn herm_basis_element(dim: usize, k: usize) -> HermitianMatrix {
    let mut v = vec![0.0; dim * dim];
    v[k] = 1.0;
    unvec_herm(dim, &v)
}

/// Standard-form conic program.
#[derive(Debug, Clone)]
pub struct ConicProgram {
    pub blocks: Vec<BlockKind>,
    /// Dense row-major `rows x n` equality operator.
    pub a: Vec<f64>,
    pub rows: usize,
    pub rhs: Vec<f64>,
    pub obj: Vec<f64>,
    pub sense: Sense,
}

impl ConicProgram {
    pub fn n_vars(&self) -> usize {
        self.blocks.iter().map(|b| b.vec_len()).sum()
    }

    pub fn block_offset(&self, idx: usize) -> usize {
        self.blocks[..idx].iter().map(|b| b.vec_len()).sum()
    }

    /// Extract a Hermitian block from a flat iterate.
    pub fn block_matrix(&self, x: &[f64], idx: usize) -> HermitianMatrix {
        let off = self.block_offset(idx);
        match self.blocks[idx] {
            BlockKind::Psd { dim } | BlockKind::FreeHerm { dim } => {
                unvec_herm(dim, &x[off..off + dim * dim])
            }
            _ => panic!("block {idx} is not a matrix block"),
        }
    }

    pub fn block_scalars<'a>(&self, x: &'a [f64], idx: usize) -> &'a [f64] {
        let off = self.block_offset(idx);
        &x[off..off + self.blocks[idx].vec_len()]
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.obj.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn apply_a(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n_vars();
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.a[r * n..(r + 1) * n];
            *o = row.iter().zip(x).map(|(a, v)| a * v).sum();
        }
    }

    fn apply_at(&self, y: &[f64], out: &mut [f64]) {
        let n = self.n_vars();
        out.fill(0.0);
        for (r, yv) in y.iter().enumerate() {
            if *yv == 0.0 {
                continue;
            }
            let row = &self.a[r * n..(r + 1) * n];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yv;
            }
        }
    }

    /// `||A x - rhs||_2` of an iterate.
    pub fn affine_residual(&self, x: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.rows];
        self.apply_a(x, &mut ax);
        ax.iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Euclidean projection onto the cone product.
    pub fn cone_project(&self, x: &mut [f64]) -> Result<()> {
        let mut off = 0;
        for b in &self.blocks {
            let len = b.vec_len();
            match *b {
                BlockKind::Psd { dim } => {
                    let m = unvec_herm(dim, &x[off..off + len]);
                    let p = psd_project(&m)?;
                    x[off..off + len].copy_from_slice(&vec_herm(&p));
                }
                BlockKind::NonNeg { .. } => {
                    for v in &mut x[off..off + len] {
                        if *v < 0.0 {
                            *v = 0.0;
                        }
                    }
                }
                BlockKind::FreeHerm { .. } | BlockKind::FreeScalar { .. } => {}
            }
            off += len;
        }
        Ok(())
    }
}

/// Options for [`solve`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iter: usize,
    /// Absolute stopping tolerance.
    pub abs_tol: f64,
    /// Relative stopping tolerance (also the bound certified by
    /// `Status::Optimal`).
    pub rel_tol: f64,
    /// Initial ADMM penalty.
    pub rho: f64,
    /// Record the iterate objective/feasibility every this many iterations
    /// (0 disables the trace).
    pub trace_every: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iter: 200_000,
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            rho: 1.0,
            trace_every: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    MaxIter,
    InfeasibleSuspected,
}

/// Objective and feasibility of the cone-feasible iterate at a sampled
/// iteration.
#[derive(Debug, Clone, Copy)]
pub struct TracePoint {
    pub iter: usize,
    pub objective: f64,
    pub affine_residual: f64,
}

/// Result of a conic solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub objective: f64,
    /// Cone-feasible iterate (flat vectorized form).
    pub x: Vec<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: Status,
    pub trace: Vec<TracePoint>,
}

/// Dense Cholesky factorization of a symmetric positive definite matrix.
struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    fn new(mut m: Vec<f64>, n: usize) -> Result<Self> {
        for j in 0..n {
            for k in 0..j {
                let ljk = m[j * n + k];
                if ljk != 0.0 {
                    for i in j..n {
                        m[i * n + j] -= m[i * n + k] * ljk;
                    }
                }
            }
            let d = m[j * n + j];
            if d <= 0.0 {
                return Err(Error::RankDeficient { rcond: d });
            }
            let s = d.sqrt();
            for i in j..n {
                m[i * n + j] /= s;
            }
        }
        Ok(Self { n, l: m })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.l[i * n + k] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= self.l[k * n + i] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        y
    }
}

/// Projector onto `{x : A x = b}` via the normal equations of `A Aᵀ`.
struct AffineProjector<'p> {
    program: &'p ConicProgram,
    chol: Cholesky,
}

impl<'p> AffineProjector<'p> {
    fn new(program: &'p ConicProgram) -> Result<Self> {
        let (rows, n) = (program.rows, program.n_vars());
        let mut gram = vec![0.0; rows * rows];
        for r in 0..rows {
            let row_r = &program.a[r * n..(r + 1) * n];
            for s in r..rows {
                let row_s = &program.a[s * n..(s + 1) * n];
                let v: f64 = row_r.iter().zip(row_s).map(|(a, b)| a * b).sum();
                gram[r * rows + s] = v;
                gram[s * rows + r] = v;
            }
        }
        let chol = Cholesky::new(gram, rows).or_else(|_| {
            // Tiny ridge as a deterministic fallback for nearly dependent rows.
            let mut ridged = vec![0.0; rows * rows];
            for r in 0..rows {
                for s in 0..rows {
                    ridged[r * rows + s] = {
                        let row_r = &program.a[r * n..(r + 1) * n];
                        let row_s = &program.a[s * n..(s + 1) * n];
                        row_r.iter().zip(row_s).map(|(a, b)| a * b).sum::<f64>()
                    };
                }
                ridged[r * rows + r] += 1e-12;
            }
            Cholesky::new(ridged, rows)
        })?;
        Ok(Self { program, chol })
    }

    fn project(&self, v: &[f64], out: &mut [f64]) {
        let p = self.program;
        let mut av = vec![0.0; p.rows];
        p.apply_a(v, &mut av);
        for (a, b) in av.iter_mut().zip(&p.rhs) {
            *a -= b;
        }
        let y = self.chol.solve(&av);
        let mut aty = vec![0.0; p.n_vars()];
        p.apply_at(&y, &mut aty);
        for ((o, vi), c) in out.iter_mut().zip(v).zip(&aty) {
            *o = vi - c;
        }
    }
}

/// Deterministic ADMM solve of a standard-form program.
pub fn solve(program: &ConicProgram, opts: &SolveOptions) -> Result<SolveReport> {
    if program.rows == 0 {
        return Err(Error::InvalidArgument("program has no equality rows".into()));
    }
    let n = program.n_vars();
    if program.a.len() != program.rows * n || program.rhs.len() != program.rows {
        return Err(Error::DimMismatch("program operator shape".into()));
    }
    let projector = AffineProjector::new(program)?;

    // Internally always minimize.
    let sign = match program.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let c: Vec<f64> = program.obj.iter().map(|v| sign * v).collect();

    let mut rho = opts.rho;
    let mut x = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut z_prev = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut trace = Vec::new();

    let sqrt_n = (n as f64).sqrt();
    let mut status = Status::MaxIter;
    let mut iterations = opts.max_iter;
    let mut primal_residual = f64::INFINITY;
    let mut dual_residual = f64::INFINITY;
    // Stagnation bookkeeping for the infeasibility heuristic.
    let mut window_best = f64::INFINITY;
    let mut prev_window_best = f64::INFINITY;

    for it in 0..opts.max_iter {
        // x-update: argmin over {Ax = b} of c'x + rho/2 ||x - z + u||^2.
        for i in 0..n {
            v[i] = z[i] - u[i] - c[i] / rho;
        }
        projector.project(&v, &mut x);

        // z-update: cone projection of x + u.
        z_prev.copy_from_slice(&z);
        for i in 0..n {
            z[i] = x[i] + u[i];
        }
        program.cone_project(&mut z)?;

        // scaled dual update
        for i in 0..n {
            u[i] += x[i] - z[i];
        }

        let r_prim: f64 = x
            .iter()
            .zip(&z)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let r_dual: f64 = rho
            * z.iter()
                .zip(&z_prev)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
        primal_residual = r_prim;
        dual_residual = r_dual;

        if opts.trace_every > 0 && (it + 1) % opts.trace_every == 0 {
            trace.push(TracePoint {
                iter: it + 1,
                objective: program.objective_value(&z),
                affine_residual: program.affine_residual(&z),
            });
        }

        let x_norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        let z_norm = z.iter().map(|a| a * a).sum::<f64>().sqrt();
        let u_norm = u.iter().map(|a| a * a).sum::<f64>().sqrt();
        let eps_pri = sqrt_n * opts.abs_tol + opts.rel_tol * x_norm.max(z_norm);
        let eps_dual = sqrt_n * opts.abs_tol + opts.rel_tol * rho * u_norm;
        if r_prim <= eps_pri && r_dual <= eps_dual {
            status = Status::Optimal;
            iterations = it + 1;
            break;
        }

        // Residual balancing; the scaled dual variable tracks 1/rho.
        if (it + 1) % 100 == 0 {
            if r_prim > 10.0 * r_dual {
                rho *= 2.0;
                for ui in u.iter_mut() {
                    *ui *= 0.5;
                }
            } else if r_dual > 10.0 * r_prim {
                rho *= 0.5;
                for ui in u.iter_mut() {
                    *ui *= 2.0;
                }
            }
        }

        // Track best combined residual over 5000-iteration windows.
        window_best = window_best.min(r_prim.max(r_dual));
        if (it + 1) % 5000 == 0 {
            prev_window_best = std::mem::replace(&mut window_best, f64::INFINITY);
        }
    }

    if status == Status::MaxIter {
        let stalled =
            prev_window_best.is_finite() && primal_residual.max(dual_residual) > 0.99 * prev_window_best;
        if stalled && primal_residual.max(dual_residual) > 1e-3 {
            status = Status::InfeasibleSuspected;
        }
        log::warn!(
            "solve hit max_iter = {} (residuals {:.3e} / {:.3e})",
            opts.max_iter,
            primal_residual,
            dual_residual
        );
    }

    Ok(SolveReport {
        objective: program.objective_value(&z),
        x: z,
        primal_residual,
        dual_residual,
        iterations,
        status,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectorization_is_isometric() {
        let mut a = HermitianMatrix::zeros(3);
        let mut b = HermitianMatrix::zeros(3);
        let mut s = 0.3f64;
        for i in 0..3 {
            for j in i..3 {
                s += 1.0;
                if i == j {
                    a.set_sym(i, j, Complex64::new(s, 0.0));
                    b.set_sym(i, j, Complex64::new(2.0 - s, 0.0));
                } else {
                    a.set_sym(i, j, Complex64::new(s, -s / 2.0));
                    b.set_sym(i, j, Complex64::new(1.0 / s, s / 3.0));
                }
            }
        }
        let (va, vb) = (vec_herm(&a), vec_herm(&b));
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        assert!((dot - a.inner(&b).unwrap()).abs() < 1e-12);
        let back = unvec_herm(3, &va);
        assert!(back.sub(&a).unwrap().frob_norm() < 1e-14);
    }

    #[test]
    fn tiny_sdp_solves() {
        // maximize <Φ, diag(1, 0)> s.t. Φ PSD, Tr Φ = 1 -> value 1.
        let dim = 2;
        let blocks = vec![BlockKind::Psd { dim }];
        let tr_row = vec_herm(&HermitianMatrix::identity(dim));
        let obj = vec_herm(&HermitianMatrix::diag(&[1.0, 0.0]));
        let program = ConicProgram {
            blocks,
            a: tr_row,
            rows: 1,
            rhs: vec![1.0],
            obj,
            sense: Sense::Maximize,
        };
        let report = solve(&program, &SolveOptions::default()).unwrap();
        assert_eq!(report.status, Status::Optimal);
        assert!((report.objective - 1.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_iterates() {
        let dim = 2;
        let program = ConicProgram {
            blocks: vec![BlockKind::Psd { dim }, BlockKind::NonNeg { len: 1 }],
            a: {
                let mut row = vec_herm(&HermitianMatrix::identity(dim));
                row.push(1.0);
                row
            },
            rows: 1,
            rhs: vec![1.0],
            obj: {
                let mut o = vec_herm(&HermitianMatrix::diag(&[0.3, 0.7]));
                o.push(0.1);
                o
            },
            sense: Sense::Maximize,
        };
        let r1 = solve(&program, &SolveOptions::default()).unwrap();
        let r2 = solve(&program, &SolveOptions::default()).unwrap();
        assert_eq!(r1.iterations, r2.iterations);
        assert_eq!(r1.x, r2.x);
        assert_eq!(r1.objective.to_bits(), r2.objective.to_bits());
    }

    #[test]
    fn scaling_covariance() {
        let dim = 2;
        let base_obj = HermitianMatrix::diag(&[0.8, 0.25]);
        let make = |s: f64| ConicProgram {
            blocks: vec![BlockKind::Psd { dim }],
            a: vec_herm(&HermitianMatrix::identity(dim)),
            rows: 1,
            rhs: vec![1.0],
            obj: vec_herm(&base_obj.scale(s)),
            sense: Sense::Maximize,
        };
        let r1 = solve(&make(1.0), &SolveOptions::default()).unwrap();
        let r3 = solve(&make(3.0), &SolveOptions::default()).unwrap();
        assert!((r3.objective - 3.0 * r1.objective).abs() < 1e-6);
    }
}
