use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("rank must be between 2 and 26, got {0}")]
    InvalidRank(usize),

    #[error("parse error in {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("the identity is not allowed here")]
    IdentityNotAllowed,

    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),

    #[error("level must be at least {min}, got {got}")]
    InvalidLevel { min: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("function is not invariant under the relation: {0}")]
    NotInvariant(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("points are related: {0} ~ {1}")]
    Related(String, String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("computation interrupted")]
    Interrupted,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}
