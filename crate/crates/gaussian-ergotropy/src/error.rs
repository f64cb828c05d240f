//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on the inputs was violated (dimensions, symmetry,
    /// positivity, missing fields, out-of-range parameters).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A factorization or iteration failed to meet its accuracy contract.
    /// Carries the offending residual so callers can report it.
    #[error("numerical failure: {message} (residual {residual:.3e})")]
    NumericalFailure { message: String, residual: f64 },

    /// The complete-positivity condition Y + iΩ ≥ iXΩXᵀ does not hold.
    #[error(
        "invalid channel: Y + iΩ - iXΩXᵀ has eigenvalue {min_eigenvalue:.6e}, \
         below the allowed -{tol:.1e}"
    )]
    InvalidChannel { min_eigenvalue: f64, tol: f64 },

    /// The operation is well-defined only on a restricted input class
    /// (e.g. invertible X in the channel minimum-energy theorem).
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    /// Too much population near the Fock cutoff for the result to be trusted.
    #[error("truncation tail {tail:.3e} exceeds {limit:.3e}; raise the cutoff")]
    TruncationTail { tail: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
