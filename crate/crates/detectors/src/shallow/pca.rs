use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::Points;
use crate::error::{DetectError, Result};
use crate::spec::PcaParams;

/// Mahalanobis distance over all principal components, with eigenvalues
/// clamped from below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    mean: Vec<f64>,
    /// Unit eigenvectors, one per entry.
    components: Vec<Vec<f64>>,
    variances: Vec<f64>,
}

impl PcaModel {
    pub fn fit(params: &PcaParams, points: &Points) -> Result<Self> {
        let (n, d) = (points.len(), points.dim());
        if n < 2 || d > n - 1 {
            return Err(DetectError::TooFewRows { algorithm: "PCA", needed: (d + 1).max(2), got: n });
        }
        let mut mean = vec![0.0; d];
        for r in points.rows() {
            mean.iter_mut().zip(r).for_each(|(m, v)| *m += v);
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let mut cov = DMatrix::<f64>::zeros(d, d);
        for r in points.rows() {
            for i in 0..d {
                let di = r[i] - mean[i];
                for j in 0..=i {
                    cov[(i, j)] += di * (r[j] - mean[j]);
                }
            }
        }
        for i in 0..d {
            for j in 0..=i {
                let v = cov[(i, j)] / (n - 1) as f64;
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(cov);
        let components = eig.eigenvectors.column_iter().map(|c| c.iter().copied().collect()).collect();
        let variances = eig.eigenvalues.iter().map(|&l| l.max(params.variance_epsilon)).collect();
        Ok(Self { mean, components, variances })
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        let centered: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        self.components
            .iter()
            .zip(&self.variances)
            .map(|(v, l)| {
                let p: f64 = v.iter().zip(&centered).map(|(a, b)| a * b).sum();
                p * p / l
            })
            .sum()
    }
}
