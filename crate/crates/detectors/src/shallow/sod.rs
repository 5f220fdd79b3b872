use serde::{Deserialize, Serialize};

use super::{euclidean, k_nearest, Points};
use crate::error::{DetectError, Result};
use crate::spec::SodParams;

/// Subspace outlier degree: distance to the reference-set mean within the
/// low-variance subspace of the shared-nearest-neighbor reference set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SodModel {
    params: SodParams,
    points: Points,
    neighbor_sets: Vec<Vec<usize>>,
}

impl SodModel {
    pub fn fit(params: &SodParams, points: &Points) -> Result<Self> {
        let n = points.len();
        let needed = params.ref_set_size.max(params.n_shared_neighbors) + 1;
        if n < needed {
            return Err(DetectError::TooFewRows { algorithm: "SOD", needed, got: n });
        }
        let neighbor_sets = points
            .rows()
            .map(|r| k_nearest(points, r, params.n_shared_neighbors).into_iter().map(|(_, i)| i).collect())
            .collect();
        Ok(Self { params: *params, points: points.clone(), neighbor_sets })
    }

    /// Indices of the reference set for `x`, best first.
    pub fn reference_set(&self, x: &[f64]) -> Vec<usize> {
        let own = k_nearest(&self.points, x, self.params.n_shared_neighbors);
        let mut mask = vec![false; self.points.len()];
        own.iter().for_each(|&(_, i)| mask[i] = true);
        let skip = self.points.position(x);
        let mut ranked: Vec<(usize, f64, usize)> = (0..self.points.len())
            .filter(|&o| Some(o) != skip)
            .map(|o| {
                let shared = self.neighbor_sets[o].iter().filter(|&&i| mask[i]).count();
                (shared, euclidean(self.points.row(o), x), o)
            })
            .collect();
        ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
        ranked.truncate(self.params.ref_set_size);
        ranked.into_iter().map(|(_, _, o)| o).collect()
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        let refs: Vec<&[f64]> = self.reference_set(x).into_iter().map(|o| self.points.row(o)).collect();
        subspace_score(&refs, x, self.params.variance_alpha)
    }
}

/// Distance from `x` to the mean of `refs` over dimensions whose variance is
/// below `alpha` times the mean variance, divided by the root of their count.
pub fn subspace_score(refs: &[&[f64]], x: &[f64], alpha: f64) -> f64 {
    let m = refs.len() as f64;
    let d = x.len();
    let mean: Vec<f64> = (0..d).map(|j| refs.iter().map(|r| r[j]).sum::<f64>() / m).collect();
    let var: Vec<f64> = (0..d).map(|j| refs.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / m).collect();
    let cut = alpha * var.iter().sum::<f64>() / d as f64;
    let relevant: Vec<usize> = (0..d).filter(|&j| var[j] < cut).collect();
    if relevant.is_empty() {
        return 0.0;
    }
    let dist: f64 = relevant.iter().map(|&j| (x[j] - mean[j]).powi(2)).sum::<f64>().sqrt();
    dist / (relevant.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_dimension_is_relevant() {
        let refs: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 0.0]).collect();
        let refs: Vec<&[f64]> = refs.iter().map(Vec::as_slice).collect();
        assert_eq!(subspace_score(&refs, &[2.0, 5.0], 0.8), 5.0);
        assert_eq!(subspace_score(&refs, &[2.0, 0.0], 0.8), 0.0);
    }

    #[test]
    fn equal_variances_give_zero() {
        let refs: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let refs: Vec<&[f64]> = refs.iter().map(Vec::as_slice).collect();
        assert_eq!(subspace_score(&refs, &[9.0, -9.0], 0.8), 0.0);
    }

    #[test]
    fn ref_set_must_be_smaller_than_train() {
        let p = Points::new(vec![0.0; 5], 1);
        let params = SodParams { n_shared_neighbors: 2, ref_set_size: 5, variance_alpha: 0.8 };
        assert!(SodModel::fit(&params, &p).is_err());
    }
}
