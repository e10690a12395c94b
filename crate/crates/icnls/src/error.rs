use std::path::PathBuf;

use serde::Serialize;

/// Process exit status of every command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Config = 1,
    Numerical = 2,
    Invariant = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Numerics(icnls_core::Error),
    #[error("invariant check failed: {0}")]
    Invariant(String),
}

impl From<icnls_core::Error> for CliError {
    fn from(e: icnls_core::Error) -> Self {
        use icnls_core::Error as E;
        match e {
            E::InvalidParams(m) | E::InvalidGrid(m) => CliError::Config(m),
            other => CliError::Numerics(other),
        }
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::Format { .. } => {
                ExitStatus::Config
            }
            CliError::Numerics(_) => ExitStatus::Numerical,
            CliError::Invariant(_) => ExitStatus::Invariant,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Format { .. } => "format",
            CliError::Numerics(_) => "numerical",
            CliError::Invariant(_) => "invariant",
        }
    }

    /// Machine-readable form written to standard error.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Payload<'a> {
            error: &'a str,
            exit_code: i32,
            message: String,
        }
        let payload = Payload {
            error: self.kind(),
            exit_code: self.status() as i32,
            message: self.to_string(),
        };
        serde_json::to_string(&payload).expect("error payload serializes")
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
