//! CLI error taxonomy mapped to exit codes.

use thiserror::Error;

/// Exit codes: 0 success, 1 usage, 2 data, 3 internal contract violation.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<hawkwolf::Error> for CliError {
    fn from(e: hawkwolf::Error) -> Self {
        match e {
            hawkwolf::Error::Io(io) => CliError::Data(io.to_string()),
            hawkwolf::Error::ModelFormat(m) => CliError::Data(format!("model file: {m}")),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
