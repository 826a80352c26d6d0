//! Command errors and their exit codes.

use thiserror::Error;

/// A failed command.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input, configuration or query.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input that fails a check.
    #[error("validation failed: {0}")]
    Validation(String),
    /// A computation exceeded a resource cap.
    #[error("resource cap: {0}")]
    Cap(String),
    /// A file could not be read or written.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 1 validation, 2 resource cap, 3 parse or io.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Cap(_) => 2,
            Self::Parse(_) | Self::Io(_) => 3,
        }
    }

    /// Short machine-readable kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Parse(_) => "parse",
            Self::Validation(_) => "validation",
            Self::Cap(_) => "resource-cap",
            Self::Io(_) => "io",
        }
    }
}

impl From<segalign_core::Error> for CliError {
    fn from(e: segalign_core::Error) -> Self {
        use segalign_core::Error as E;
        match e {
            E::ResourceCap { .. } => Self::Cap(e.to_string()),
            E::Parse(_) | E::InvalidWord(_) | E::UnknownElement(_) | E::InvalidSegment(_) | E::InvalidPreorder(_) => {
                Self::Parse(e.to_string())
            }
            _ => Self::Validation(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Parse(e.to_string())
    }
}

/// Result alias for command code.
pub type Result<T> = std::result::Result<T, CliError>;
