use odkit_detectors::DetectError;
use odkit_store::StoreError;
use odkit_viz::VizError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_ALGORITHM: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

/// A failure carrying the process exit code it maps to.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self { code: EXIT_INTERNAL, message: message.into() }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        let code = match e {
            StoreError::Auth { .. } | StoreError::InvalidRange { .. } | StoreError::InvalidName(_) => EXIT_USAGE,
            StoreError::Io { .. } => EXIT_INTERNAL,
            _ => EXIT_DATA,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<DetectError> for CliError {
    fn from(e: DetectError) -> Self {
        let code = match e {
            DetectError::Frame(_) | DetectError::ColumnMismatch { .. } | DetectError::TooFewRows { .. } => EXIT_DATA,
            _ => EXIT_ALGORITHM,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<odkit_core::CoreError> for CliError {
    fn from(e: odkit_core::CoreError) -> Self {
        Self::data(e.to_string())
    }
}

impl From<VizError> for CliError {
    fn from(e: VizError) -> Self {
        Self::internal(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
