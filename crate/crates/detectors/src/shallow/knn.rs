use serde::{Deserialize, Serialize};

use super::{k_nearest, Points};
use crate::error::{DetectError, Result};
use crate::spec::KnnParams;

/// Distance to the k-th nearest training point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    k: usize,
    points: Points,
}

impl KnnModel {
    pub fn fit(params: &KnnParams, points: &Points) -> Result<Self> {
        if params.k >= points.len() {
            return Err(DetectError::TooFewRows { algorithm: "KNN", needed: params.k + 1, got: points.len() });
        }
        Ok(Self { k: params.k, points: points.clone() })
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        k_nearest(&self.points, x, self.k).last().map_or(0.0, |n| n.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(data: Vec<f64>, k: usize) -> Vec<f64> {
        let p = Points::new(data.clone(), 1);
        let m = KnnModel::fit(&KnnParams { k }, &p).unwrap();
        data.iter().map(|v| m.score_row(&[*v])).collect()
    }

    #[test]
    fn three_points() {
        assert_eq!(scores(vec![0.0, 1.0, 10.0], 1), vec![1.0, 1.0, 9.0]);
    }

    #[test]
    fn duplicates_score_zero() {
        assert_eq!(scores(vec![2.0, 2.0, 5.0, 5.0], 1), vec![0.0; 4]);
    }

    #[test]
    fn k_n_minus_one_is_farthest() {
        assert_eq!(scores(vec![0.0, 1.0, 10.0], 2), vec![10.0, 9.0, 10.0]);
    }

    #[test]
    fn k_too_large() {
        let p = Points::new(vec![0.0, 1.0], 1);
        assert!(KnnModel::fit(&KnnParams { k: 2 }, &p).is_err());
    }
}
