//! Error type mapping failures to process exit codes.

use std::fmt;

use remag_core::Error as CoreError;

/// CLI failure with its exit code: 2 usage, 3 I/O, 4 internal consistency.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Maps a core failure caused by user-supplied inputs: argument problems
/// become usage errors, consistency failures stay internal.
pub fn input_err(e: CoreError) -> CliError {
    match e {
        CoreError::Inconsistent(_) | CoreError::NoConvergence(_) => {
            CliError::Internal(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    }
}

/// Maps a core failure from a computation on already-validated inputs.
pub fn compute_err(e: CoreError) -> CliError {
    CliError::Internal(e.to_string())
}

pub fn io_err(e: impl fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}
