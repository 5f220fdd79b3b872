use thiserror::Error;

pub type Result<T> = std::result::Result<T, DetectError>;

#[derive(Debug, Error)]
pub enum DetectError {
    #[error("unknown algorithm {name:?}; valid names: {}", valid.join(", "))]
    UnknownAlgorithm { name: String, valid: Vec<&'static str> },
    #[error("invalid parameter `{param}` for {algorithm}: {reason}")]
    InvalidParam { algorithm: &'static str, param: String, reason: String },
    #[error("contamination must lie in (0, 0.5], got {0}")]
    InvalidContamination(f64),
    #[error("{algorithm} needs at least {needed} training rows, got {got}")]
    TooFewRows { algorithm: &'static str, needed: usize, got: usize },
    #[error("column mismatch: trained on {expected:?}, got {found:?}")]
    ColumnMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("{algorithm} cannot proceed: {reason}")]
    Degenerate { algorithm: &'static str, reason: String },
    #[error("OCSVM solver did not converge after {iterations} updates (max KKT violation {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("model file: {0}")]
    Model(String),
    #[error(transparent)]
    Numeric(#[from] odkit_nn::NnError),
    #[error(transparent)]
    Frame(#[from] odkit_core::CoreError),
}
