use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: invalid UTF-8")]
    Utf8 { path: PathBuf, line: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("line count mismatch: {src_path} has {src_lines} lines, {tgt_path} has {tgt_lines} lines")]
    LineCountMismatch {
        src_path: PathBuf,
        src_lines: usize,
        tgt_path: PathBuf,
        tgt_lines: usize,
    },

    #[error("morphology layer has {layer} sentences but corpus has {corpus}")]
    SentenceCountMismatch { corpus: usize, layer: usize },

    #[error("sentence {index}: corpus tokens [{corpus}] do not match morphology forms [{layer}]")]
    MorphMismatch {
        index: usize,
        corpus: String,
        layer: String,
    },

    #[error("sentence {index}: {message}")]
    Sentence { index: usize, message: String },

    #[error("invalid factored input at token {position}: {message}")]
    Factored { position: usize, message: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
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

    /// True when the error stems from malformed or inconsistent user input
    /// rather than a failure inside the toolkit.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}
