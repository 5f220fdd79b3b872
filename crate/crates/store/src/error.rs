use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, StoreError>;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("authentication failed for user {user:?}")]
    Auth { user: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema mismatch: expected columns {expected:?}, found {found:?}")]
    SchemaMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("timestamps must be strictly increasing: line {line} has {next} after {prev}")]
    NonMonotone { line: usize, prev: i64, next: i64 },
    #[error("cannot parse line {line}, column {column:?}: {message}")]
    Parse { line: usize, column: String, message: String },
    #[error("unknown table {database}.{table}")]
    UnknownTable { database: String, table: String },
    #[error("invalid time range: start {start} > end {end}")]
    InvalidRange { start: i64, end: i64 },
    #[error("invalid name {0:?}: use letters, digits, '_' or '-'")]
    InvalidName(String),
    #[error("corrupt segment {path}: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error(transparent)]
    Frame(#[from] odkit_core::CoreError),
}

impl StoreError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> StoreError {
        let path = path.into();
        move |source| StoreError::Io { path, source }
    }
}
