use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeanError {
    /// A mean or cone identifier that is not in the catalog.
    #[error("unknown identifier `{0}`")]
    Unknown(String),

    /// A numeric parameter outside the range its constructor accepts.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The operation needs a property the input does not declare.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument outside the representable evaluation range.
    #[error("range error: {0}")]
    Range(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, MeanError>;
