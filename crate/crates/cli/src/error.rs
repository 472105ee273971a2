use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] fractoda::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown example id `{0}`")]
    UnknownExample(String),
}

impl CliError {
    /// Process exit status: 1 for usage and configuration problems, 3 for
    /// numerical failures. Divergence (status 2) is not an error; see
    /// [`crate::simulate::SimulateReport`].
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(fractoda::Error::NoConvergence { .. })
            | CliError::Model(fractoda::Error::NonFiniteState { step: Some(_) }) => 3,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIVERGED: i32 = 2;
