//! Shared data model for the odkit outlier-detection toolkit.
//!
//! Every component exchanges [`TimeSeriesFrame`]s: a timestamped, named-column
//! matrix of finite `f64` values. Detectors produce [`ScoreVector`]s (higher is
//! more outlying) and [`LabelVector`]s (1 = outlier).

pub mod datagen;
mod error;
mod frame;
pub mod metrics;
mod rng;
mod window;

pub use error::{CoreError, Result};
pub use frame::{LabelVector, ScoreVector, TimeSeriesFrame};
pub use rng::RngSeed;
pub use window::{flatten_windows, window_slices, WindowSpec};
