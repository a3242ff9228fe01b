use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// The queried point lies in the part of an infinite box family that was truncated away.
    #[error("truncation limit reached: {0}")]
    TruncationLimit(String),

    /// An internal consistency check failed. Signals a bug, never a user error.
    #[error("internal oracle failure: {0}")]
    Oracle(String),

    #[error("orbit did not close within {budget} iterations")]
    OrbitBudget { budget: usize },
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn oracle(msg: impl Into<String>) -> Self {
        Error::Oracle(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
