use std::fmt;

use rrtool_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Validation,
    Io,
    Unsupported,
    Horizon,
    Internal,
    /// A golden expectation did not match.
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Validation,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Io,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Validation | Kind::Io | Kind::Unsupported => 2,
            Kind::Horizon => 3,
            Kind::Internal | Kind::Mismatch => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            Kind::Validation => "invalid input",
            Kind::Io => "io error",
            Kind::Unsupported => "unsupported",
            Kind::Horizon => "horizon exhausted",
            Kind::Internal => "internal check failed",
            Kind::Mismatch => "expectation mismatch",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Validation(_) => Kind::Validation,
            Error::Unsupported(_) => Kind::Unsupported,
            Error::Overflow { .. } | Error::Horizon(_) => Kind::Horizon,
            Error::InternalCheck(_) => Kind::Internal,
        };
        let message = match e {
            Error::Validation(m) | Error::Unsupported(m) | Error::Horizon(m) | Error::InternalCheck(m) => m,
            Error::Overflow { degree, truncation } => {
                format!("degree {degree} exceeds truncation {truncation}; raise [ring].truncation")
            }
        };
        CliError { kind, message }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
