use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Io = 1,
    Config = 2,
    Capacity = 3,
    Verification = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] walsh_prime::Error),
    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },
    #[error("cache for n={n} is locked by another writer ({path}); remove the lock if stale")]
    Locked { n: u32, path: PathBuf },
    #[error("no cache for n={n} in {dir} and --no-sieve was given")]
    MissingCache { n: u32, dir: PathBuf },
    #[error("{failed} verification check(s) failed")]
    Verification { failed: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        match self {
            CliError::Config(_) | CliError::MissingCache { .. } => ExitStatus::Config,
            CliError::Core(walsh_prime::Error::Capacity { .. })
            | CliError::Core(walsh_prime::Error::Unacknowledged { .. }) => ExitStatus::Capacity,
            CliError::Core(_) => ExitStatus::Config,
            CliError::Verification { .. } => ExitStatus::Verification,
            CliError::Cache { .. }
            | CliError::Locked { .. }
            | CliError::Io(_)
            | CliError::Csv(_)
            | CliError::Json(_) => ExitStatus::Io,
        }
    }
}
