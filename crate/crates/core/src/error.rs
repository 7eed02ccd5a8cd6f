//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A rate triple cannot form a consistent multiple-access region.
    #[error("inconsistent rate triple: {0}")]
    InconsistentRates(String),

    /// Numerical routine failed to reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Adaptive equalizer diverged.
    #[error("equalizer diverged: {0}")]
    EqualizerDiverged(String),

    /// Config or data file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
