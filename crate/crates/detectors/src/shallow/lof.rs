use serde::{Deserialize, Serialize};

use super::{k_nearest, Points};
use crate::error::{DetectError, Result};
use crate::spec::LofParams;

/// Lower bound on the mean reachability distance, so coincident points get a
/// large but finite local reachability density.
const MIN_MEAN_REACH: f64 = 1e-10;

/// Local outlier factor with exactly `k` neighbors per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LofModel {
    k: usize,
    points: Points,
    k_distance: Vec<f64>,
    lrd: Vec<f64>,
}

fn lrd_from(neighbors: &[(f64, usize)], k_distance: &[f64]) -> f64 {
    let mean_reach = neighbors.iter().map(|&(d, o)| d.max(k_distance[o])).sum::<f64>() / neighbors.len() as f64;
    1.0 / mean_reach.max(MIN_MEAN_REACH)
}

impl LofModel {
    pub fn fit(params: &LofParams, points: &Points) -> Result<Self> {
        let k = params.k;
        if k >= points.len() {
            return Err(DetectError::TooFewRows { algorithm: "LOF", needed: k + 1, got: points.len() });
        }
        let neighborhoods: Vec<Vec<(f64, usize)>> = points.rows().map(|r| k_nearest(points, r, k)).collect();
        let k_distance: Vec<f64> = neighborhoods.iter().map(|nn| nn[k - 1].0).collect();
        let lrd = neighborhoods.iter().map(|nn| lrd_from(nn, &k_distance)).collect();
        Ok(Self { k, points: points.clone(), k_distance, lrd })
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        let nn = k_nearest(&self.points, x, self.k);
        let own = lrd_from(&nn, &self.k_distance);
        nn.iter().map(|&(_, o)| self.lrd[o]).sum::<f64>() / (nn.len() as f64 * own)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(data: Vec<f64>, dim: usize, k: usize) -> LofModel {
        LofModel::fit(&LofParams { k }, &Points::new(data, dim)).unwrap()
    }

    #[test]
    fn grid_centre_is_one() {
        let m = model((0..7).map(f64::from).collect(), 1, 2);
        assert!((m.score_row(&[3.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicated_point_is_one() {
        let m = model(vec![1.5; 4], 1, 3);
        assert!((m.score_row(&[1.5]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn far_point_is_argmax() {
        let data = vec![0.0, 0.0, 0.1, 0.0, 0.0, 0.1, 0.1, 0.1, 0.05, 0.05, 3.0, 3.0];
        let m = model(data.clone(), 2, 2);
        let s: Vec<f64> = data.chunks(2).map(|r| m.score_row(r)).collect();
        assert!(s[5] > 1.0);
        assert!(s[..5].iter().all(|&v| v < s[5]));
    }
}
