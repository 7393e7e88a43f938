//! File formats, reports and command implementations for the `ctxlab`
//! binary.

pub mod commands;
pub mod dot;
pub mod format;
pub mod presets;
pub mod report;

use ctxlab_core::ErrorClass;

/// Exit codes of the command line tool.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const INVARIANT: i32 = 3;
    pub const NUMERIC: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot access {0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("malformed scenario file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario file: {0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] ctxlab_core::Error),
}

/// A failed command: message plus process exit code.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: exit::INPUT,
            message: message.into(),
        }
    }
}

impl From<ctxlab_core::Error> for CliError {
    fn from(e: ctxlab_core::Error) -> Self {
        let code = match e.class() {
            ErrorClass::Input => exit::INPUT,
            ErrorClass::Invariant => exit::INVARIANT,
            ErrorClass::Numeric => exit::NUMERIC,
        };
        let message = match e.class() {
            ErrorClass::Invariant => format!("invariant `{}` violated: {e}", e.name()),
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        match e {
            FileError::Core(inner) => inner.into(),
            other => CliError::input(other.to_string()),
        }
    }
}
