//! Error type shared by all modules.
//!
//! The variants map one-to-one onto process exit codes: validation and parse
//! failures are caller errors (exit 2), resource refusals mean a configured
//! ceiling was hit (exit 3), and internal errors mean a proven invariant was
//! violated at runtime (exit 4) and always indicate a bug.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or mathematically inadmissible input.
    #[error("validation error: {0}")]
    Validation(String),

    /// Unparseable input text.
    #[error("parse error: {0}")]
    Parse(String),

    /// A configured ceiling would be exceeded; the message names the ceiling
    /// and, where one exists, a cheaper alternative.
    #[error("resource error: {0}")]
    Resource(String),

    /// An internal invariant failed; this is a defect, not a user error.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Parse(_) => 2,
            Error::Resource(_) => 3,
            Error::Internal(_) => 4,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
