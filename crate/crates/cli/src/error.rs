use std::path::PathBuf;

use qwalk_core::WalkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Walk(#[from] WalkError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest {path}: {source}")]
    Manifest {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 0 success, 1 I/O, 2 usage or configuration, 3 numerical degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Manifest { .. } => 2,
            CliError::Walk(e) if e.is_numerical() => 3,
            CliError::Walk(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
