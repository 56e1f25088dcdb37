use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hmskit_core::Error),

    #[error("{what} exceeds the limit of {limit}")]
    ResourceLimit { what: String, limit: usize },

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid argument: {0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: 2 for unparsable input, 3 for mathematically
    /// invalid or unsupported input, 4 for resource limits, 5 for I/O.
    pub fn exit_code(&self) -> i32 {
        use hmskit_core::Error as E;
        match self {
            CliError::Core(E::Parse(_)) | CliError::Usage(_) => 2,
            CliError::Core(_) => 3,
            CliError::ResourceLimit { .. } => 4,
            CliError::Io { .. } => 5,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
