//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An exact i128 computation left the representable range.
    /// Overflow is always a hard error, never a silent wrap.
    #[error("arithmetic overflow in {0}")]
    ArithmeticOverflow(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("window has zero volume")]
    DegenerateWindow,

    #[error("operation not supported for family {family}: {reason}")]
    UnsupportedFamily { family: String, reason: String },

    /// Estimated work exceeds the configured budget. `required` is the
    /// candidate-tuple (or matrix) count of the request.
    #[error("enumeration budget exceeded: needs ~{required} candidates, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
