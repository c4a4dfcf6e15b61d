use thiserror::Error;

/// Failure categories surfaced by every pipeline stage.
///
/// The category determines the CLI exit code; see [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    VerifyFail(String),
}

impl Error {
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Budget(_) => "budget",
            Error::Precondition(_) => "precondition",
            Error::VerifyFail(_) => "verify-fail",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precondition(_) => 2,
            Error::Budget(_) => 3,
            Error::VerifyFail(_) => 4,
            Error::Parse(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
