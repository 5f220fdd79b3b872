use serde::{Deserialize, Serialize};

use super::Points;
use crate::error::{DetectError, Result};
use crate::spec::HbosParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Histogram {
    min: f64,
    width: f64,
    /// `log(1 / height)` per bin, heights normalized so the tallest bin is 1.
    bin_scores: Vec<f64>,
}

impl Histogram {
    fn fit(values: impl Iterator<Item = f64> + Clone, n_bins: usize) -> Self {
        let (min, max) = values.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let width = (max - min) / n_bins as f64;
        let mut counts = vec![0usize; n_bins];
        let mut n = 0usize;
        for v in values {
            counts[bin_index(v, min, width, n_bins)] += 1;
            n += 1;
        }
        let tallest = *counts.iter().max().unwrap() as f64;
        let floor = 1.0 / (n as f64 * n_bins as f64);
        let bin_scores = counts
            .iter()
            .map(|&c| {
                let h = if c == 0 { floor } else { c as f64 / tallest };
                -h.ln()
            })
            .collect();
        Self { min, width, bin_scores }
    }

    fn score(&self, v: f64) -> f64 {
        self.bin_scores[bin_index(v, self.min, self.width, self.bin_scores.len())]
    }
}

fn bin_index(v: f64, min: f64, width: f64, n_bins: usize) -> usize {
    if width <= 0.0 || !width.is_finite() {
        return 0;
    }
    let pos = ((v - min) / width).floor();
    if pos <= 0.0 {
        0
    } else {
        (pos as usize).min(n_bins - 1)
    }
}

/// Histogram-based outlier score: per-feature equal-width histograms, summed
/// log inverse heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HbosModel {
    histograms: Vec<Histogram>,
}

impl HbosModel {
    pub fn fit(params: &HbosParams, points: &Points) -> Result<Self> {
        if points.is_empty() {
            return Err(DetectError::TooFewRows { algorithm: "HBOS", needed: 1, got: 0 });
        }
        let histograms =
            (0..points.dim()).map(|j| Histogram::fit(points.rows().map(move |r| r[j]), params.n_bins)).collect();
        Ok(Self { histograms })
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        self.histograms.iter().zip(x).map(|(h, &v)| h.score(v)).sum()
    }

    /// Score contribution of feature `j` alone.
    pub fn feature_score(&self, j: usize, v: f64) -> f64 {
        self.histograms[j].score(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(data: Vec<f64>, dim: usize, n_bins: usize) -> HbosModel {
        HbosModel::fit(&HbosParams { n_bins }, &Points::new(data, dim)).unwrap()
    }

    #[test]
    fn dense_and_rare_bins() {
        // counts [9, 1] over [0, 1]
        let mut data = vec![0.1; 9];
        data[0] = 0.0;
        data.push(1.0);
        let m = fit(data, 1, 2);
        assert_eq!(m.score_row(&[0.2]), 0.0);
        assert!((m.score_row(&[0.8]) - 9f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_clamps_and_empty_bins_floor() {
        let m = fit(vec![0.0, 0.0, 3.0], 1, 3);
        assert_eq!(m.score_row(&[-100.0]), 0.0);
        assert!((m.score_row(&[100.0]) - 2f64.ln()).abs() < 1e-12);
        // middle bin is empty: floor 1 / (3 * 3)
        assert!((m.score_row(&[1.5]) - 9f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn uniform_one_per_bin_scores_equal() {
        let data: Vec<f64> = (0..10).map(|i| i as f64 + 0.5).collect();
        let m = fit(data.clone(), 1, 10);
        for v in data {
            assert_eq!(m.score_row(&[v]), 0.0);
        }
    }

    #[test]
    fn constant_feature_scores_zero() {
        let m = fit(vec![4.0; 5], 1, 10);
        assert_eq!(m.score_row(&[4.0]), 0.0);
        assert_eq!(m.score_row(&[-1.0]), 0.0);
    }
}
