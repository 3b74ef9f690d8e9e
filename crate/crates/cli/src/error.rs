use std::path::Path;

use serde_json::json;
use thiserror::Error;

/// Failure of a subcommand, carrying the process exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("missing artifact {path}: {reason}")]
    MissingArtifact { path: String, reason: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] qrslab::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn missing(path: &Path, reason: impl ToString) -> Self {
        CliError::MissingArtifact {
            path: path.display().to_string(),
            reason: reason.to_string(),
        }
    }

    pub fn io(path: &Path, err: impl ToString) -> Self {
        CliError::Io(format!("{}: {}", path.display(), err.to_string()))
    }

    /// 1 for data errors raised while scoring, 2 for usage and config
    /// problems, 3 when an input artifact is absent or unreadable.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qrslab::Error::Data(_)) => 1,
            CliError::MissingArtifact { .. } => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::MissingArtifact { .. } => "missing_artifact",
            CliError::Io(_) => "io",
            CliError::Core(qrslab::Error::Data(_)) => "data",
            CliError::Core(_) => "invalid_argument",
        }
    }

    /// One-line machine-readable form written to standard error.
    pub fn to_json(&self) -> String {
        json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

pub type CliResult<T> = Result<T, CliError>;
