use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("ring validation failed:\n{}", .0.join("\n"))]
    Validation(Vec<String>),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
