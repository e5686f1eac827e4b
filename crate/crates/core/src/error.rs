use thiserror::Error;

/// Errors raised by the compressors, geometry primitives and stream IO.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LtcError {
    /// A sample arrived with a timestamp not strictly after the previous one.
    #[error("non-monotone timestamp: {got} does not follow {prev}")]
    NonMonotone { prev: f64, got: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in sample at t={t}")]
    NonFinite { t: f64 },

    /// A reconstruction query fell outside the transmitted time range.
    #[error("time {t} outside transmitted range [{first}, {last}]")]
    OutOfRange { t: f64, first: f64, last: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),

    /// An internal invariant did not hold. Always a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl LtcError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        LtcError::InvalidParameter(msg.into())
    }

    /// True for errors caused by the caller's input rather than by this crate.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, LtcError::Invariant(_))
    }
}

impl From<std::io::Error> for LtcError {
    fn from(e: std::io::Error) -> Self {
        LtcError::Io(e.to_string())
    }
}

pub type Result<T, E = LtcError> = std::result::Result<T, E>;
