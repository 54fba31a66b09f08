use thiserror::Error;
use whittaker_core::Error as CoreError;

/// Exit code 2: the request itself is malformed.
pub const EXIT_USAGE: i32 = 2;
/// Exit code 1: a well-formed request failed during computation, or a checked
/// property was violated.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(CoreError),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Compute(_) | Self::Failure(_) => EXIT_FAILURE,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::UnsupportedType { .. }
            | CoreError::InvalidParams(_)
            | CoreError::NonOrthogonalSupport(..)
            | CoreError::DimensionMismatch { .. } => Self::Usage(e.to_string()),
            other => Self::Compute(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Failure(e.to_string())
    }
}
