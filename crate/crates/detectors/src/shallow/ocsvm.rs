use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Points;
use crate::error::{DetectError, Result};
use crate::spec::{Gamma, OcsvmParams};

/// Largest training set for which the kernel matrix is materialized.
pub const MAX_TRAIN_ROWS: usize = 10_000;

fn rbf(gamma: f64, a: &[f64], b: &[f64]) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

/// `1 / (d * v)` where `v` is the mean per-feature population variance.
fn scale_gamma(points: &Points) -> f64 {
    let (n, d) = (points.len() as f64, points.dim());
    let mut total = 0.0;
    for j in 0..d {
        let mean = points.rows().map(|r| r[j]).sum::<f64>() / n;
        total += points.rows().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
    }
    let var = total / d as f64;
    if var > 0.0 {
        1.0 / (d as f64 * var)
    } else {
        1.0
    }
}

/// One-class SVM with an RBF kernel, solved in the dual by pairwise updates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcsvmModel {
    gamma: f64,
    rho: f64,
    upper: f64,
    /// Support vectors and their nonzero coefficients.
    support: Points,
    coef: Vec<f64>,
    alpha: Vec<f64>,
    kkt_violation: f64,
}

struct Solution {
    alpha: Vec<f64>,
    rho: f64,
    violation: f64,
}

/// Minimizes `½ αᵀKα` subject to `0 ≤ α ≤ upper`, `Σα = 1`.
fn solve(k: &[f64], n: usize, upper: f64, tol: f64, max_updates: usize) -> Result<Solution> {
    let mut alpha = vec![0.0; n];
    let mut remaining = 1.0;
    for a in alpha.iter_mut() {
        if remaining <= 0.0 {
            break;
        }
        *a = upper.min(remaining);
        remaining -= *a;
    }
    let mut grad = vec![0.0; n];
    for (i, &a) in alpha.iter().enumerate().filter(|(_, &a)| a > 0.0) {
        for (g, kv) in grad.iter_mut().zip(&k[i * n..(i + 1) * n]) {
            *g += a * kv;
        }
    }
    let select = |alpha: &[f64], grad: &[f64]| {
        let mut up = (f64::INFINITY, usize::MAX);
        let mut low = (f64::NEG_INFINITY, usize::MAX);
        for i in 0..n {
            if alpha[i] < upper && grad[i] < up.0 {
                up = (grad[i], i);
            }
            if alpha[i] > 0.0 && grad[i] > low.0 {
                low = (grad[i], i);
            }
        }
        (up, low)
    };
    let mut updates = 0;
    loop {
        let ((g_up, i), (g_low, j)) = select(&alpha, &grad);
        let violation = if i == usize::MAX || j == usize::MAX { 0.0 } else { g_low - g_up };
        if violation <= tol {
            let rho = offset(&alpha, &grad, upper);
            return Ok(Solution { alpha, rho, violation: violation.max(0.0) });
        }
        if updates >= max_updates {
            return Err(DetectError::NonConvergence { iterations: updates, residual: violation });
        }
        let eta = (k[i * n + i] + k[j * n + j] - 2.0 * k[i * n + j]).max(1e-12);
        let delta = (violation / eta).min(upper - alpha[i]).min(alpha[j]);
        alpha[i] += delta;
        alpha[j] -= delta;
        if upper - alpha[i] < 1e-15 * upper {
            alpha[i] = upper;
        }
        if alpha[j] < 1e-15 * upper {
            alpha[j] = 0.0;
        }
        let (ki, kj) = (&k[i * n..(i + 1) * n], &k[j * n..(j + 1) * n]);
        for ((g, a), b) in grad.iter_mut().zip(ki).zip(kj) {
            *g += delta * (a - b);
        }
        updates += 1;
    }
}

/// Mean gradient over free coefficients, else the midpoint of the feasible interval.
fn offset(alpha: &[f64], grad: &[f64], upper: f64) -> f64 {
    let free: Vec<f64> = alpha.iter().zip(grad).filter(|(&a, _)| a > 0.0 && a < upper).map(|(_, &g)| g).collect();
    if !free.is_empty() {
        return free.iter().sum::<f64>() / free.len() as f64;
    }
    let lo = alpha.iter().zip(grad).filter(|(&a, _)| a >= upper).map(|(_, &g)| g).fold(f64::NEG_INFINITY, f64::max);
    let hi = alpha.iter().zip(grad).filter(|(&a, _)| a <= 0.0).map(|(_, &g)| g).fold(f64::INFINITY, f64::min);
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo + hi) / 2.0,
        (true, false) => lo,
        (false, true) => hi,
        (false, false) => 0.0,
    }
}

impl OcsvmModel {
    pub fn fit(params: &OcsvmParams, points: &Points) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(DetectError::TooFewRows { algorithm: "OCSVM", needed: 1, got: 0 });
        }
        if n > MAX_TRAIN_ROWS {
            return Err(DetectError::Degenerate {
                algorithm: "OCSVM",
                reason: format!("{n} training rows exceed the kernel-matrix limit of {MAX_TRAIN_ROWS}"),
            });
        }
        let gamma = match params.gamma {
            Gamma::Scale => scale_gamma(points),
            Gamma::Value(g) => g,
        };
        let kernel: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| points.rows().map(move |r| rbf(gamma, points.row(i), r)))
            .collect();
        let upper = 1.0 / (params.nu * n as f64);
        let sol = solve(&kernel, n, upper, params.smo_tolerance, params.max_passes.saturating_mul(n))?;
        let mut sv = Vec::new();
        let mut coef = Vec::new();
        for (r, &a) in points.rows().zip(&sol.alpha) {
            if a > 0.0 {
                sv.extend_from_slice(r);
                coef.push(a);
            }
        }
        Ok(Self {
            gamma,
            rho: sol.rho,
            upper,
            support: Points::new(sv, points.dim()),
            coef,
            alpha: sol.alpha,
            kkt_violation: sol.violation,
        })
    }

    /// Dual coefficients, one per training row.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper
    }

    pub fn kkt_violation(&self) -> f64 {
        self.kkt_violation
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        let f: f64 = self.support.rows().zip(&self.coef).map(|(s, a)| a * rbf(self.gamma, s, x)).sum();
        self.rho - f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_nu_one() {
        let p = Points::new(vec![0.0, 0.0, 1.0, 3.0], 2);
        let params = OcsvmParams { nu: 1.0, gamma: Gamma::Value(0.5), smo_tolerance: 1e-4, max_passes: 10 };
        let m = OcsvmModel::fit(&params, &p).unwrap();
        assert!((m.alpha()[0] - 0.5).abs() < 1e-10);
        assert!((m.alpha()[1] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn kkt_holds_after_fit() {
        let data: Vec<f64> = (0..120).map(|i| ((i * 7919) % 97) as f64 / 10.0).collect();
        let p = Points::new(data, 2);
        let params = OcsvmParams { nu: 0.3, gamma: Gamma::Scale, smo_tolerance: 1e-6, max_passes: 200 };
        let m = OcsvmModel::fit(&params, &p).unwrap();
        let sum: f64 = m.alpha().iter().sum();
        assert!((sum - 1.0).abs() < 1e-10);
        assert!(m.alpha().iter().all(|&a| (0.0..=m.upper_bound() + 1e-10).contains(&a)));
        assert!(m.kkt_violation() <= 1e-6);
    }

    #[test]
    fn non_convergence_is_reported() {
        let data: Vec<f64> = (0..60).map(|i| ((i * 31) % 17) as f64).collect();
        let p = Points::new(data, 2);
        let params = OcsvmParams { nu: 0.2, gamma: Gamma::Value(0.1), smo_tolerance: 1e-12, max_passes: 1 };
        match OcsvmModel::fit(&params, &p) {
            Err(DetectError::NonConvergence { residual, .. }) => assert!(residual > 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
