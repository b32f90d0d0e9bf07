use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root order must be a positive integer")]
    InvalidOrder,

    #[error("exponent {exponent} is out of range for root order {order}")]
    ExponentOutOfRange { exponent: i64, order: u32 },

    #[error("quaternion {0} is not a unit quaternion")]
    NonUnitQuaternion(String),

    #[error("sequence is empty")]
    EmptySequence,

    #[error("decimation by {t} is not a permutation of a length-{len} sequence")]
    NonInvertibleDecimation { t: usize, len: usize },

    #[error("divisor {d} does not divide length {len}")]
    InvalidDivisor { d: usize, len: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid sequence block: {0}")]
    InvalidBlock(String),

    #[error("value domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
