use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("substitution image for x{var} is not invertible (a Laurent variable needs a single-term image)")]
    NonInvertibleImage { var: usize },

    #[error("truncation order mismatch: {0}")]
    OrderMismatch(String),

    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("invalid mu-sequence: {0}")]
    InvalidMuSeq(String),

    #[error("mu-sequence violates the single relation fixing mu_{index}: expected {expected}, found {found}")]
    RelationViolated {
        index: usize,
        expected: String,
        found: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("linear system inconsistent at weight {weight}")]
    Inconsistent { weight: i64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
