use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("timestamps must be strictly increasing (row {row}: {prev} then {next})")]
    NonMonotoneTimestamps { row: usize, prev: i64, next: i64 },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("column names must be non-empty")]
    EmptyColumnName,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("window exceeds frame ({window} rows requested, frame has {rows})")]
    WindowExceedsFrame { window: usize, rows: usize },
    #[error("window length and stride must be at least 1")]
    InvalidWindow,
    #[error("no windows to flatten")]
    NoWindows,
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("roc_auc is undefined when truth contains a single class")]
    SingleClass,
}
