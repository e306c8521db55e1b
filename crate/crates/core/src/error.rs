use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent data: {0}")]
    Data(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("convention check failed: {0}")]
    Convention(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
