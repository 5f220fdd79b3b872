//! Training-free EMA-deviation scorer for a single series.

use serde::{Deserialize, Serialize};

use crate::error::{DetectError, Result};
use crate::spec::LuminolParams;

/// Default trailing window: 20% of the series, at least 3 rows.
pub fn default_lag_window(n: usize) -> usize {
    ((0.2 * n as f64).round() as usize).max(3)
}

/// Raw deviations `|x_i - EMA_i|`, where `EMA_i` runs over the up to
/// `lag_window` values preceding `i`, starting from their mean.
pub fn ema_deviations(series: &[f64], smoothing: f64, lag_window: usize) -> Vec<f64> {
    (0..series.len())
        .map(|i| {
            if i == 0 {
                return 0.0;
            }
            let window = &series[i.saturating_sub(lag_window)..i];
            let base = window[0];
            let seed = base + window.iter().map(|v| v - base).sum::<f64>() / window.len() as f64;
            let ema = window.iter().fold(seed, |ema, &v| ema + smoothing * (v - ema));
            (series[i] - ema).abs()
        })
        .collect()
}

/// Rescales to `[0, 1]`; an all-equal input maps to zeros.
pub fn min_max_normalize(raw: &[f64]) -> Vec<f64> {
    let (lo, hi) = raw.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(hi > lo) {
        return vec![0.0; raw.len()];
    }
    raw.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuminolModel {
    smoothing: f64,
    lag_window: Option<usize>,
    target: usize,
}

impl LuminolModel {
    /// Resolves the target column; there is nothing to learn.
    pub fn fit(params: &LuminolParams, columns: &[String]) -> Result<Self> {
        let target = match &params.target_column {
            None => 0,
            Some(name) => columns.iter().position(|c| c == name).ok_or_else(|| DetectError::InvalidParam {
                algorithm: "LUMINOL",
                param: "target_column".into(),
                reason: format!("no column named {name:?}"),
            })?,
        };
        Ok(Self { smoothing: params.ema_smoothing, lag_window: params.lag_window, target })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn score_series(&self, series: &[f64]) -> Result<Vec<f64>> {
        let lag = self.lag_window.unwrap_or_else(|| default_lag_window(series.len()));
        if series.len() < lag {
            return Err(DetectError::TooFewRows { algorithm: "LUMINOL", needed: lag, got: series.len() });
        }
        Ok(min_max_normalize(&ema_deviations(series, self.smoothing, lag)))
    }
}
