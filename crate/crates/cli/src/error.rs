use std::io;
use std::path::PathBuf;

use spiral_dirac_core::error::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Compute(#[from] CoreError),
    #[error("verification failed: {0} check(s) did not pass")]
    Verify(usize),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{context}: {message}")]
    Format { context: String, message: String },
}

impl CliError {
    pub fn field(key: &str, message: impl std::fmt::Display) -> Self {
        CliError::Config(format!("field `{key}`: {message}"))
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Compute(_) => 1,
            CliError::Verify(_) => 2,
            CliError::Io { .. } | CliError::Format { .. } => 3,
        }
    }
}
