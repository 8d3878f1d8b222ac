use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed JSON at line {line}, column {column}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Core(#[from] palmcheck::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn json(path: impl Into<PathBuf>, e: &serde_json::Error) -> Self {
        CliError::Json { path: path.into(), line: e.line(), column: e.column(), message: e.to_string() }
    }

    /// 3 for resource caps, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_cap() => 3,
            _ => 2,
        }
    }
}
