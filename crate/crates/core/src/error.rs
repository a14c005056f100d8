use thiserror::Error;

use crate::matching::HallViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed edge-list or trajectory input, with the 1-based line number.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A precondition of the requested operation does not hold.
    #[error("usage: {0}")]
    Usage(String),

    /// A rejection sampler ran out of attempts.
    #[error("resource: {0}")]
    Resource(String),

    /// No integer transport exists; carries the Hall-deficient row set.
    #[error("{context}: transport infeasible ({violation})")]
    Infeasible {
        context: String,
        violation: HallViolation,
    },

    /// A scenario's existence argument failed on this input.
    #[error("internal: {0}")]
    Internal(String),

    /// An exact certificate (sum identity, uniform law) did not hold.
    #[error("certification failed: {0}")]
    Certification(String),

    /// Exhaustive enumeration hit its depth cap.
    #[error("enumeration truncated at depth {0}")]
    Truncated(usize),

    #[error("graph digest mismatch: trajectory has {found}, graph has {expected}")]
    DigestMismatch { expected: String, found: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
