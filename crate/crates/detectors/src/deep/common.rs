use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::shallow::Points;

/// Per-feature rescaling to `[0, 1]` over the training range. Constant
/// features are only shifted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    min: Vec<f64>,
    range: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(points: &Points) -> Self {
        let d = points.dim();
        let mut min = vec![f64::INFINITY; d];
        let mut max = vec![f64::NEG_INFINITY; d];
        for r in points.rows() {
            for j in 0..d {
                min[j] = min[j].min(r[j]);
                max[j] = max[j].max(r[j]);
            }
        }
        let range = min.iter().zip(&max).map(|(lo, hi)| if hi > lo { hi - lo } else { 1.0 }).collect();
        Self { min, range }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.min).zip(&self.range).map(|((v, m), r)| (v - m) / r).collect()
    }
}

/// Per-feature standardization. Constant features are only centred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZScaler {
    mean: Vec<f64>,
    std: Vec<f64>,
}

impl ZScaler {
    pub fn fit(points: &Points) -> Self {
        let (n, d) = (points.len() as f64, points.dim());
        let mean: Vec<f64> = (0..d).map(|j| points.rows().map(|r| r[j]).sum::<f64>() / n).collect();
        let std = (0..d)
            .map(|j| {
                let v = points.rows().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n;
                if v > 0.0 {
                    v.sqrt()
                } else {
                    1.0
                }
            })
            .collect();
        Self { mean, std }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.mean).zip(&self.std).map(|((v, m), s)| (v - m) / s).collect()
    }

    pub fn transform_points(&self, points: &Points) -> Points {
        Points::new(points.rows().flat_map(|r| self.transform(r)).collect(), points.dim())
    }
}

/// Shuffled mini-batches of `0..n`, one `Vec` per batch.
pub(crate) fn batches(n: usize, batch: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.chunks(batch.max(1)).map(<[usize]>::to_vec).collect()
}

pub(crate) fn scale(v: &mut [f64], s: f64) {
    v.iter_mut().for_each(|x| *x *= s);
}
