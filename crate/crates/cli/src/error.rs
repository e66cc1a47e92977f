use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] nads_core::Error),

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Relative gaps need a positive best score.
    #[error("best final score {0} is not positive, gaps are undefined")]
    DegenerateReference(f64),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit status: 2 invalid input, 3 I/O, 4 infeasible parameters.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(nads_core::Error::Io(_)) | CliError::Io { .. } => 3,
            CliError::Core(nads_core::Error::Divergence(_)) => 4,
            _ => 2,
        }
    }
}
