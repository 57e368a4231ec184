use std::path::PathBuf;

use frate_core::Error as CoreError;

/// Errors of the command line front end.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// Process exit code: 2 for input errors, 3 for solver failures, 4 when
    /// a size cap is exceeded.
    /// Filesystem failures count as input errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::SizeCapExceeded { .. }) => 4,
            CliError::Core(CoreError::SolverDiverged(_) | CoreError::OracleFailure(_)) => 3,
            _ => 2,
        }
    }
}
