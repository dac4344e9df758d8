use std::fmt;
use std::process::ExitCode;

use rq_core::Error;

/// Everything that ends a run, tagged with the exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Malformed config or arguments.
    Schema(String),
    Core(Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        let code = match self {
            CliError::Schema(_) => 2,
            CliError::Core(Error::InvalidArgument(_) | Error::OutOfRange(_)) => 2,
            CliError::Core(Error::ResourceLimit(_)) => 3,
            CliError::Core(Error::Integrity(_)) => 4,
            CliError::Core(Error::Io(_)) => 1,
        };
        ExitCode::from(code)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(msg) => write!(f, "invalid input: {msg}"),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

pub fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}
