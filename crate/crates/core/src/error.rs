use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A weight update produced a non-finite coefficient.
    #[error("divergence at tap {tap}{}", iteration.map(|k| format!(" (iteration {k})")).unwrap_or_default())]
    Divergence {
        tap: usize,
        iteration: Option<usize>,
    },

    #[error("config error at line {line}, key `{key}`: {reason}")]
    Config {
        line: usize,
        key: String,
        reason: String,
    },

    #[error("csv parse error at row {row}: {reason}")]
    Csv { row: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("every trial diverged for: {}", algorithms.join(", "))]
    AllDiverged { algorithms: Vec<String> },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
