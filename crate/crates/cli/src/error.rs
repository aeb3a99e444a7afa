use std::fmt;

use nilcalc_core::{Diagnostic, Error as CoreError};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse { message: String, line: Option<usize>, column: Option<usize> },
    Invalid(Vec<Diagnostic>),
    Core(CoreError),
    Regression(usize),
    Io(std::io::Error),
}

impl CliError {
    /// Process exit code: 1 usage, 2 parse or validation, 3 regression mismatch, 4 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(CoreError::Domain(_) | CoreError::UnsupportedStep { .. }) => 1,
            CliError::Parse { .. } | CliError::Invalid(_) => 2,
            CliError::Core(CoreError::Malformed(_) | CoreError::NotNilpotent) => 2,
            CliError::Regression(_) => 3,
            CliError::Core(CoreError::Invariant(_)) => 4,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Parse { .. } => "parse",
            CliError::Invalid(_) => "invalid-algebra",
            CliError::Core(CoreError::Domain(_)) => "domain",
            CliError::Core(CoreError::UnsupportedStep { .. }) => "unsupported-step",
            CliError::Core(CoreError::Malformed(_)) => "malformed",
            CliError::Core(CoreError::NotNilpotent) => "not-nilpotent",
            CliError::Core(CoreError::Invariant(_)) => "invariant-violation",
            CliError::Regression(_) => "regression-mismatch",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Parse { message, line: Some(l), column: Some(c) } => write!(f, "line {l}, column {c}: {message}"),
            CliError::Parse { message, .. } => write!(f, "{message}"),
            CliError::Invalid(diags) => {
                write!(f, "algebra fails validation:")?;
                for d in diags {
                    write!(f, "\n  {d}")?;
                }
                Ok(())
            }
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Regression(n) => write!(f, "{n} corpus expectation(s) failed"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
