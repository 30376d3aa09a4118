//! Crate-wide error type.
//!
//! Errors are grouped by how the CLI maps them to exit codes: input
//! validation problems (`Validation`, `MixedField`, `Dimension`, parse
//! errors), mathematical property violations detected in user data
//! (`Math`), and breaches of invariants the library itself is supposed
//! to maintain (`Internal`).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Entries of a matrix or the parts of a construction live over
    /// different fields.
    #[error("mixed fields: {0}")]
    MixedField(String),

    /// Shape mismatch in a linear-algebra or graded-map operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Malformed or inconsistent input data.
    #[error("validation error: {0}")]
    Validation(String),

    /// A mathematical property required of the input fails (e.g. a
    /// Stasheff identity, a failed model verification).
    #[error("mathematical property violation: {0}")]
    Math(String),

    /// An invariant the library maintains internally was violated.
    /// Seeing this is a bug.
    #[error("internal invariant breach: {0}")]
    Internal(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn math(msg: impl Into<String>) -> Self {
        Error::Math(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
