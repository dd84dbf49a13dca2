use std::path::PathBuf;

use thiserror::Error;

/// Failures of a run, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] largeface_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("invalid configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Config(String),
}

impl RunError {
    pub fn config(msg: impl Into<String>) -> Self {
        RunError::Config(msg.into())
    }

    /// 3 for numerical failures and aborted simulations, 2 for everything the
    /// user can fix in the configuration or the file system.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core(e) if e.is_runtime() => 3,
            _ => 2,
        }
    }
}

pub type RunResult<T> = Result<T, RunError>;
