//! The thirteen odkit outlier detectors behind one contract: [`algorithm_selection`]
//! builds a validated [`DetectorSpec`], [`fit`] trains it into a
//! [`FittedDetector`], which then scores frames with
//! [`FittedDetector::decision_function`] and labels them with
//! [`FittedDetector::predict`].

pub mod deep;
mod detector;
mod error;
pub mod luminol;
mod quantile;
pub mod shallow;
mod spec;

pub use detector::{fit, FittedDetector, Model};
pub use error::{DetectError, Result};
pub use quantile::quantile_linear;
pub use spec::*;
