use std::io;
use std::path::PathBuf;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    /// Malformed or missing input.
    #[error("{0}")]
    Input(String),
    /// A builder or measure precondition failed.
    #[error("{0}")]
    Domain(String),
    /// The run finished but found a violated invariant or bound.
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } | CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Violation(_) => 4,
        }
    }

    pub(crate) fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }
}
