//! Self-contained SVG figures for outlier detection results.
//!
//! Static two-feature data is drawn as a kernel density contour panel next to
//! a scatter whose fill gets lighter as the outlier score rises. Time series
//! are drawn as one curve per column, and scores as a curve with a threshold
//! line and marks on the points above it.

mod error;
mod figure;
mod kde;
mod render;

use std::path::Path;

use odkit_core::TimeSeriesFrame;

pub use error::{Result, VizError};
pub use figure::{lightness, shade, Axis, FigureSpec};
pub use kde::{silverman_bandwidth, Kde, KdeGrid};
pub use render::{normalize_scores, render_distribution, render_outlierscore, PlotKind};

fn write(out: &Path, svg: String) -> Result<()> {
    std::fs::write(out, svg).map_err(|source| VizError::Io { path: out.to_path_buf(), source })
}

/// Writes the distribution figure to `out`.
pub fn visualize_distribution(
    frame: &TimeSeriesFrame,
    scores: &[f64],
    kind: PlotKind,
    spec: &FigureSpec,
    out: &Path,
) -> Result<()> {
    write(out, render_distribution(frame, scores, kind, spec)?)
}

/// Writes the score figure to `out`.
pub fn visualize_outlierscore(
    timestamps: &[i64],
    scores: &[f64],
    threshold: f64,
    spec: &FigureSpec,
    out: &Path,
) -> Result<()> {
    write(out, render_outlierscore(timestamps, scores, threshold, spec)?)
}
