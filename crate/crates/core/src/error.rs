use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TbaError {
    #[error("point count {0} outside 1..={max}", max = crate::lattice::N_MAX)]
    InvalidPointCount(usize),

    #[error("domain mismatch: {left} points vs {right} points")]
    DomainMismatch { left: usize, right: usize },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: usize },

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl From<serde_json::Error> for TbaError {
    fn from(e: serde_json::Error) -> Self {
        TbaError::Serde(e.to_string())
    }
}

pub type Result<T, E = TbaError> = std::result::Result<T, E>;
