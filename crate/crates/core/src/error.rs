use thiserror::Error;

/// Errors surfaced by model ingestion and the operator calculus.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("model validation failed: {0}")]
    Validation(String),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("generator index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),

    #[error("operation requires a homogeneous form, got degrees {0:?}")]
    Inhomogeneous(Vec<usize>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("input error: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
