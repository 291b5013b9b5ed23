use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tour: {0}")]
    InvalidTour(String),
    #[error("invalid loading plan: {0}")]
    InvalidPlan(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size {size} exceeds configured cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("capacity overflow: {0}")]
    Capacity(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
