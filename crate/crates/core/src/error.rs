//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input matrix violates Hermitian symmetry beyond the rejection tolerance.
    #[error("matrix is not Hermitian: max |H[i][j] - conj(H[j][i])| = {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A matrix that must be inverted is numerically singular.
    #[error("matrix is rank deficient: reciprocal condition number {rcond:.3e}")]
    RankDeficient { rcond: f64 },

    #[error("iteration did not converge: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
