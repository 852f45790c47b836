use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the command-line layer.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent input. `path` locates the offending field.
    #[error("{file}: {path}: {message}")]
    Schema {
        file: String,
        path: String,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qhist_core::Error),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    /// At least one validation suite failed; the report was still written.
    #[error("{failed} validation suite(s) failed")]
    SuitesFailed { failed: usize },
}

impl CliError {
    /// 0 success, 1 validation failure, 2 input or contract error,
    /// 3 resource limit.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::SuitesFailed { .. } => 1,
            CliError::Core(qhist_core::Error::Resource(_)) | CliError::Write { .. } => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
