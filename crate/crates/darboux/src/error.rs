//! Error taxonomy shared by the whole crate.
//!
//! Variants are grouped by the way a caller should react:
//! configuration and domain problems are caller errors (CLI exit code 2),
//! while numerical and oracle failures signal that a computation could not
//! be completed at the requested accuracy (CLI exit code 3).

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// The dressing configuration violates a structural invariant
    /// (dimensions, Hermiticity, definiteness, zero imaginary part, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The requested evaluation point lies outside the domain of the
    /// operation (excluded spectral lines, distributional boundaries, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is declared out of scope for the given inputs.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A numerical procedure failed or lost too much accuracy
    /// (factorization breakdown, quadrature non-convergence, health checks).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The brute-force oracle could not certify its own accuracy
    /// (tail-rate mismatch, window too small).
    #[error("oracle failure: {0}")]
    Oracle(String),
}

impl Error {
    /// Process exit code the CLI maps this error to:
    /// 2 for caller errors, 3 for numerical/oracle failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::Domain(_) | Error::Unsupported(_) => 2,
            Error::Numerical(_) | Error::Oracle(_) => 3,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
