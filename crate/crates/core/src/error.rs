//! Crate-wide error type.

/// Errors produced by validation and numerical routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input matrix deviates from Hermitian symmetry beyond tolerance.
    #[error("matrix is not Hermitian (max |M - M\u{2020}| entry = {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    /// Two operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A matrix fails the density-matrix contract (trace, positivity, size).
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative routine failed to reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Two independent computation routes disagree beyond tolerance.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
