use thiserror::Error;

/// Unified error type for the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A semigroup element index outside the action's index set.
    #[error("invalid element index: {0}")]
    InvalidIndex(String),

    /// A structurally malformed subshift description.
    #[error("invalid transition matrix: {0}")]
    BadMatrix(String),

    /// Period argument outside the supported range.
    #[error("period {0} outside supported range 1..=64")]
    BadPeriod(u64),

    /// A request whose exact answer would exceed a hard size cap.
    #[error("{op} would exceed the configured cap ({cap}): {detail}")]
    ResourceCap {
        op: &'static str,
        cap: u64,
        detail: String,
    },

    /// Scale parameter that makes no sense (non-positive, NaN, too small).
    #[error("invalid scale parameter {name} = {value}")]
    BadScale { name: &'static str, value: f64 },

    /// Configuration or input text rejected at a specific position.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Input file could not be read.
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
