use std::io;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("insufficient data: need at least {needed} points, got {given}")]
    InsufficientData { needed: usize, given: usize },

    #[error("sample is constant (zero standard deviation)")]
    ConstantSample,

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
