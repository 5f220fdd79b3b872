//! Seeded synthetic data: a static two-Gaussian mixture with uniform noise
//! outliers, and a sine/trend/noise series with injected anomalies.

use rand::seq::SliceRandom;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::frame::{LabelVector, TimeSeriesFrame};
use crate::rng::RngSeed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticGenSpec {
    pub n_inliers: usize,
    pub dimension: usize,
    pub contamination: f64,
    /// Cluster centers; `None` means two clusters at `+2` and `-2` on every axis.
    pub centers: Option<Vec<Vec<f64>>>,
    pub cluster_std: f64,
    pub noise_low: f64,
    pub noise_high: f64,
    pub seed: RngSeed,
}

impl Default for StaticGenSpec {
    fn default() -> Self {
        Self {
            n_inliers: 900,
            dimension: 2,
            contamination: 0.1,
            centers: None,
            cluster_std: 0.5,
            noise_low: -6.0,
            noise_high: 6.0,
            seed: RngSeed(7),
        }
    }
}

impl StaticGenSpec {
    /// Outlier count such that outliers make up `contamination` of all rows.
    pub fn n_outliers(&self) -> usize {
        (self.contamination * self.n_inliers as f64 / (1.0 - self.contamination)).round() as usize
    }

    fn centers(&self) -> Vec<Vec<f64>> {
        self.centers.clone().unwrap_or_else(|| vec![vec![2.0; self.dimension], vec![-2.0; self.dimension]])
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(CoreError::InvalidSpec(msg.to_string()));
        if !(self.contamination > 0.0 && self.contamination <= 0.5) {
            return bad("contamination must lie in (0, 0.5]");
        }
        if self.dimension == 0 {
            return bad("dimension must be at least 1");
        }
        if self.n_inliers == 0 {
            return bad("n_inliers must be at least 1");
        }
        if !(self.cluster_std > 0.0 && self.cluster_std.is_finite()) {
            return bad("cluster_std must be positive");
        }
        if !(self.noise_low < self.noise_high) || !self.noise_low.is_finite() || !self.noise_high.is_finite() {
            return bad("noise range must be a finite, non-empty interval");
        }
        let centers = self.centers();
        if centers.is_empty() || centers.iter().any(|c| c.len() != self.dimension) {
            return bad("every center must have `dimension` coordinates");
        }
        Ok(())
    }
}

/// Draws inliers split evenly over the cluster centers plus uniform-noise
/// outliers, shuffled together. Outliers carry label 1.
pub fn generate_static(spec: &StaticGenSpec) -> Result<(TimeSeriesFrame, LabelVector)> {
    spec.validate()?;
    let centers = spec.centers();
    let d = spec.dimension;
    let mut rng = spec.seed.stream(0);
    let gauss = Normal::new(0.0, spec.cluster_std).expect("validated std");
    let noise = Uniform::new(spec.noise_low, spec.noise_high).expect("validated range");

    let mut rows: Vec<(Vec<f64>, u8)> = Vec::with_capacity(spec.n_inliers + spec.n_outliers());
    for i in 0..spec.n_inliers {
        // round-robin keeps the split even; earlier clusters take the remainder
        let center = &centers[i % centers.len()];
        rows.push((center.iter().map(|&c| c + gauss.sample(&mut rng)).collect(), 0));
    }
    for _ in 0..spec.n_outliers() {
        rows.push(((0..d).map(|_| noise.sample(&mut rng)).collect(), 1));
    }
    rows.shuffle(&mut rng);

    let columns = (0..d).map(|j| format!("x{j}")).collect();
    let labels = LabelVector::from_bools(rows.iter().map(|r| r.1 == 1));
    let values = rows.into_iter().flat_map(|r| r.0).collect();
    Ok((TimeSeriesFrame::static_frame(columns, values)?, labels))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Anomaly {
    /// Adds `magnitude` at a single position.
    Spike { at: usize, magnitude: f64 },
    /// Subtracts `magnitude` at a single position.
    Drop { at: usize, magnitude: f64 },
    /// Adds `magnitude` on `[at, at + extent)`.
    LevelShift { at: usize, magnitude: f64, extent: usize },
    /// Adds `slope * (t - at)` on `[at, at + extent)`.
    TrendChange { at: usize, slope: f64, extent: usize },
}

impl Anomaly {
    pub fn onset(&self) -> usize {
        match *self {
            Anomaly::Spike { at, .. }
            | Anomaly::Drop { at, .. }
            | Anomaly::LevelShift { at, .. }
            | Anomaly::TrendChange { at, .. } => at,
        }
    }

    /// Affected positions, clipped to the series length.
    pub fn span(&self, length: usize) -> std::ops::Range<usize> {
        let at = self.onset();
        let end = match *self {
            Anomaly::Spike { .. } | Anomaly::Drop { .. } => at + 1,
            Anomaly::LevelShift { extent, .. } | Anomaly::TrendChange { extent, .. } => at + extent,
        };
        at..end.min(length)
    }

    fn offset(&self, t: usize) -> f64 {
        match *self {
            Anomaly::Spike { magnitude, .. } => magnitude,
            Anomaly::Drop { magnitude, .. } => -magnitude,
            Anomaly::LevelShift { magnitude, .. } => magnitude,
            Anomaly::TrendChange { at, slope, .. } => slope * (t - at) as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsGenSpec {
    pub length: usize,
    pub amplitude: f64,
    /// Sine period in samples.
    pub period: f64,
    /// Linear trend per sample.
    pub trend: f64,
    pub noise_sigma: f64,
    pub anomalies: Vec<Anomaly>,
    pub seed: RngSeed,
}

impl Default for TsGenSpec {
    fn default() -> Self {
        Self {
            length: 500,
            amplitude: 1.0,
            period: 100.0,
            trend: 0.0,
            noise_sigma: 0.2,
            anomalies: Vec::new(),
            seed: RngSeed(11),
        }
    }
}

impl TsGenSpec {
    /// Sine plus trend plus Gaussian noise, before any anomaly is injected.
    pub fn base_signal(&self) -> Result<Vec<f64>> {
        if self.length == 0 {
            return Err(CoreError::InvalidSpec("length must be at least 1".into()));
        }
        if !(self.period > 0.0) || !(self.noise_sigma >= 0.0) {
            return Err(CoreError::InvalidSpec("period must be positive and noise_sigma nonnegative".into()));
        }
        let mut rng = self.seed.stream(1);
        let noise = Normal::new(0.0, self.noise_sigma).map_err(|e| CoreError::InvalidSpec(e.to_string()))?;
        Ok((0..self.length)
            .map(|t| {
                let phase = 2.0 * std::f64::consts::PI * t as f64 / self.period;
                let eps = if self.noise_sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
                self.amplitude * phase.sin() + self.trend * t as f64 + eps
            })
            .collect())
    }
}

/// Single-column series (`value`) with timestamps `0, 1000, 2000, ...` ms.
/// Labels are 1 exactly on positions touched by an anomaly.
pub fn generate_timeseries(spec: &TsGenSpec) -> Result<(TimeSeriesFrame, LabelVector)> {
    let mut values = spec.base_signal()?;
    let n = spec.length;
    let mut labels = vec![0u8; n];
    for anomaly in &spec.anomalies {
        if anomaly.onset() >= n {
            return Err(CoreError::InvalidSpec(format!("anomaly at {} outside series of length {n}", anomaly.onset())));
        }
        let span = anomaly.span(n);
        if span.is_empty() {
            return Err(CoreError::InvalidSpec("anomaly extent must be at least 1".into()));
        }
        if labels[span.clone()].contains(&1) {
            return Err(CoreError::InvalidSpec(format!("anomaly at {} overlaps another anomaly", anomaly.onset())));
        }
        for t in span {
            labels[t] = 1;
            values[t] += anomaly.offset(t);
        }
    }
    let timestamps = (0..n as i64).map(|t| t * 1000).collect();
    let frame = TimeSeriesFrame::new(timestamps, vec!["value".into()], values)?;
    Ok((frame, LabelVector::new(labels)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_counts() {
        let spec = StaticGenSpec { n_inliers: 90, ..Default::default() };
        let (frame, labels) = generate_static(&spec).unwrap();
        assert_eq!(frame.n_rows(), 100);
        assert_eq!(labels.count_outliers(), 10);

        let spec = StaticGenSpec { n_inliers: 10, contamination: 0.5, ..Default::default() };
        let (frame, labels) = generate_static(&spec).unwrap();
        assert_eq!((frame.n_rows(), labels.count_outliers()), (20, 10));
    }

    #[test]
    fn static_defaults_give_thousand_rows() {
        let (frame, labels) = generate_static(&StaticGenSpec::default()).unwrap();
        assert_eq!((frame.n_rows(), frame.n_cols()), (1000, 2));
        assert_eq!(labels.count_outliers(), 100);
    }

    #[test]
    fn static_is_seed_deterministic() {
        let a = generate_static(&StaticGenSpec::default()).unwrap();
        let b = generate_static(&StaticGenSpec::default()).unwrap();
        assert_eq!(a, b);
        let bits = |f: &TimeSeriesFrame| f.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.0), bits(&b.0));
        let c = generate_static(&StaticGenSpec { seed: RngSeed(8), ..Default::default() }).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn static_inliers_split_evenly() {
        let spec = StaticGenSpec { n_inliers: 101, ..Default::default() };
        let (frame, labels) = generate_static(&spec).unwrap();
        let positive = frame.rows().zip(labels.iter()).filter(|(r, &l)| l == 0 && r[0] > 0.0).count();
        // centers at +-2 with std 0.5: sign identifies the cluster
        assert_eq!(positive, 51);
    }

    #[test]
    fn static_rejects_bad_contamination() {
        let spec = StaticGenSpec { contamination: 0.6, ..Default::default() };
        assert!(generate_static(&spec).is_err());
    }

    #[test]
    fn single_spike() {
        let spec =
            TsGenSpec { length: 100, anomalies: vec![Anomaly::Spike { at: 50, magnitude: 3.0 }], ..Default::default() };
        let (frame, labels) = generate_timeseries(&spec).unwrap();
        assert_eq!(labels.count_outliers(), 1);
        assert_eq!(labels[50], 1);
        let base = spec.base_signal().unwrap();
        assert_eq!(frame.values()[50], base[50] + 3.0);
        assert_eq!(frame.timestamps()[3], 3000);
    }

    #[test]
    fn level_shift_extent() {
        let spec = TsGenSpec {
            length: 100,
            anomalies: vec![Anomaly::LevelShift { at: 50, magnitude: 1.0, extent: 50 }],
            ..Default::default()
        };
        let (_, labels) = generate_timeseries(&spec).unwrap();
        assert!(labels[..50].iter().all(|&l| l == 0));
        assert!(labels[50..].iter().all(|&l| l == 1));
    }

    #[test]
    fn trend_change_and_drop() {
        let spec = TsGenSpec {
            length: 40,
            noise_sigma: 0.0,
            amplitude: 0.0,
            anomalies: vec![
                Anomaly::TrendChange { at: 10, slope: 0.5, extent: 5 },
                Anomaly::Drop { at: 30, magnitude: 2.0 },
            ],
            ..Default::default()
        };
        let (frame, labels) = generate_timeseries(&spec).unwrap();
        assert_eq!(frame.values()[12], 1.0);
        assert_eq!(frame.values()[30], -2.0);
        assert_eq!(labels.count_outliers(), 6);
    }

    #[test]
    fn no_anomalies_is_base_signal() {
        let spec = TsGenSpec { length: 100, ..Default::default() };
        let (frame, labels) = generate_timeseries(&spec).unwrap();
        assert_eq!(labels.count_outliers(), 0);
        assert_eq!(frame.values(), &spec.base_signal().unwrap()[..]);
    }

    #[test]
    fn overlap_is_rejected() {
        let spec = TsGenSpec {
            length: 100,
            anomalies: vec![
                Anomaly::LevelShift { at: 10, magnitude: 1.0, extent: 20 },
                Anomaly::Spike { at: 15, magnitude: 3.0 },
            ],
            ..Default::default()
        };
        assert!(matches!(generate_timeseries(&spec), Err(CoreError::InvalidSpec(_))));
    }

    #[test]
    fn out_of_range_anomaly_rejected() {
        let spec =
            TsGenSpec { length: 10, anomalies: vec![Anomaly::Spike { at: 10, magnitude: 1.0 }], ..Default::default() };
        assert!(generate_timeseries(&spec).is_err());
    }
}
