use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("graph generation failed: {0}")]
    Generation(String),

    #[error("non-finite energy at iteration {iteration}")]
    NonFiniteEnergy { iteration: usize, trace: Vec<f64> },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid value: {0}")]
    Value(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input or configuration rather than
    /// a failure during computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidInstance(_)
                | Error::InvalidConfig(_)
                | Error::InvalidInput(_)
                | Error::Parse { .. }
                | Error::Value(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
