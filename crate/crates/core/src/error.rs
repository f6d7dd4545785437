use thiserror::Error;

/// Error type shared across the library.
///
/// `Validation` carries a human-readable description that names the offending
/// quantity (for example the matrix index that breaks Hermiticity, or the
/// word "trace"), so callers can surface actionable messages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numerical consistency check failed: {0}")]
    NumericalConsistency(String),

    #[error("infeasible by construction: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
