use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, VizError>;

#[derive(Debug, Error)]
pub enum VizError {
    #[error("cannot plot an empty frame")]
    Empty,
    #[error("static distribution plots need exactly 2 feature columns, got {0}")]
    NotTwoDimensional(usize),
    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("invalid figure settings: {0}")]
    InvalidFigure(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
