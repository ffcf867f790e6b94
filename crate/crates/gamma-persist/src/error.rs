use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch")]
    FieldMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("undefined arithmetic: {0}")]
    Undefined(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-proper convolution")]
    NonProperConvolution,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("hyperplane {index} is not gamma-compatible: {reason}")]
    IncompatibleHyperplane { index: usize, reason: String },
}

impl Error {
    /// True for errors caused by malformed input rather than domain failures.
    pub fn is_malformed(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Shape(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
