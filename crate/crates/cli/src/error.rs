use std::process::ExitCode;

use thiserror::Error;

/// Failures that end a command, each with a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input, or a bad argument.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] lcadag::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    /// A computed object that should be impossible, such as routes that disagree.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 3,
            _ => 2,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}
