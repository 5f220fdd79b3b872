//! Cholesky-based helpers for small symmetric positive-definite matrices.

use serde::{Deserialize, Serialize};

use crate::error::{expect_len, NnError, Result};
use crate::tensor::Tensor2;

/// Lower-triangular `L` with `A = L Lᵀ`.
pub fn cholesky(a: &Tensor2) -> Result<Tensor2> {
    let n = a.rows();
    if a.cols() != n {
        return Err(NnError::Shape(format!("cholesky of a {}x{} matrix", n, a.cols())));
    }
    let mut l = Tensor2::zeros(n, n);
    for j in 0..n {
        let mut diag = a.get(j, j);
        for k in 0..j {
            diag -= l.get(j, k) * l.get(j, k);
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(NnError::NotPositiveDefinite { pivot: j, value: diag });
        }
        let d = diag.sqrt();
        l.set(j, j, d);
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / d);
        }
    }
    Ok(l)
}

/// Solves `L y = b` by forward substitution.
pub fn forward_substitute(l: &Tensor2, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s = b[i] - (0..i).map(|k| l.get(i, k) * y[k]).sum::<f64>();
        y[i] = s / l.get(i, i);
    }
    y
}

/// Solves `A x = b` given the Cholesky factor of `A`.
pub fn cholesky_solve(l: &Tensor2, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let y = forward_substitute(l, b);
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s = y[i] - (i + 1..n).map(|k| l.get(k, i) * x[k]).sum::<f64>();
        x[i] = s / l.get(i, i);
    }
    x
}

/// `log det A` from its Cholesky factor.
pub fn cholesky_log_det(l: &Tensor2) -> f64 {
    (0..l.rows()).map(|i| l.get(i, i).ln()).sum::<f64>() * 2.0
}

/// `A⁻¹` from its Cholesky factor.
pub fn cholesky_inverse(l: &Tensor2) -> Tensor2 {
    let n = l.rows();
    let mut inv = Tensor2::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.fill(0.0);
        e[j] = 1.0;
        let col = cholesky_solve(l, &e);
        for (i, v) in col.into_iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    inv
}

/// Multivariate Gaussian fitted to error vectors, used for Mahalanobis scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    mean: Vec<f64>,
    cov: Tensor2,
    chol: Tensor2,
}

impl Gaussian {
    /// Maximum-likelihood mean and covariance of `samples` (each of length
    /// `dim`), with `eps` added to the covariance diagonal.
    pub fn fit<'a>(samples: impl IntoIterator<Item = &'a [f64]>, dim: usize, eps: f64) -> Result<Gaussian> {
        let samples: Vec<&[f64]> = samples.into_iter().collect();
        if samples.is_empty() {
            return Err(NnError::Shape("cannot fit a Gaussian to zero samples".into()));
        }
        let n = samples.len() as f64;
        let mut mean = vec![0.0; dim];
        for s in &samples {
            expect_len("gaussian sample", s.len(), dim)?;
            for (m, v) in mean.iter_mut().zip(s.iter()) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut cov = Tensor2::zeros(dim, dim);
        for s in &samples {
            for i in 0..dim {
                let di = s[i] - mean[i];
                for j in 0..=i {
                    let v = cov.get(i, j) + di * (s[j] - mean[j]);
                    cov.set(i, j, v);
                }
            }
        }
        for i in 0..dim {
            for j in 0..=i {
                let v = cov.get(i, j) / n + if i == j { eps } else { 0.0 };
                cov.set(i, j, v);
                cov.set(j, i, v);
            }
        }
        let chol = cholesky(&cov)?;
        Ok(Gaussian { mean, cov, chol })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &Tensor2 {
        &self.cov
    }

    /// Squared Mahalanobis distance `(x - μ)ᵀ Σ⁻¹ (x - μ)`.
    pub fn mahalanobis(&self, x: &[f64]) -> f64 {
        let d: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        let y = forward_substitute(&self.chol, &d);
        y.iter().map(|v| v * v).sum()
    }
}
