use std::f64::consts::PI;

use odkit_core::RngSeed;
use odkit_nn::linalg::{cholesky, cholesky_inverse, cholesky_log_det, forward_substitute};
use odkit_nn::{Activation, Adam, Mlp, MlpCache, ParamBuilder, Tensor2};
use serde::{Deserialize, Serialize};

use super::common::{batches, MinMaxScaler};
use crate::error::{DetectError, Result};
use crate::shallow::Points;
use crate::spec::DagmmParams;

/// Keeps norms away from zero in the reconstruction features.
const DELTA: f64 = 1e-12;

/// Relative Euclidean reconstruction error and cosine distance.
pub fn recon_features(x: &[f64], xh: &[f64]) -> (f64, f64) {
    let diff: f64 = x.iter().zip(xh).map(|(a, b)| (a - b) * (a - b)).sum();
    let xx: f64 = x.iter().map(|a| a * a).sum();
    let hh: f64 = xh.iter().map(|a| a * a).sum();
    let xy: f64 = x.iter().zip(xh).map(|(a, b)| a * b).sum();
    let rel = (diff + DELTA).sqrt() / (xx + DELTA).sqrt();
    let cos = 1.0 - xy / ((xx + DELTA) * (hh + DELTA)).sqrt();
    (rel, cos)
}

/// Gradients of both reconstruction features with respect to `xh`.
fn recon_feature_grads(x: &[f64], xh: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let diff: f64 = x.iter().zip(xh).map(|(a, b)| (a - b) * (a - b)).sum();
    let a = x.iter().map(|v| v * v).sum::<f64>() + DELTA;
    let b = xh.iter().map(|v| v * v).sum::<f64>() + DELTA;
    let p: f64 = x.iter().zip(xh).map(|(u, v)| u * v).sum();
    let rel_scale = 1.0 / ((diff + DELTA).sqrt() * a.sqrt());
    let drel = x.iter().zip(xh).map(|(u, v)| (v - u) * rel_scale).collect();
    let ab = (a * b).sqrt();
    let dcos = x.iter().zip(xh).map(|(u, v)| -(u / ab - p * v / (ab * b))).collect();
    (drel, dcos)
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Gaussian mixture with moments taken from soft memberships.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gmm {
    phi: Vec<f64>,
    mu: Vec<Vec<f64>>,
    cov: Vec<Tensor2>,
    chol: Vec<Tensor2>,
}

struct Moments {
    mass: Vec<f64>,
    phi: Vec<f64>,
    mu: Vec<Vec<f64>>,
    cov: Vec<Tensor2>,
}

fn moments(z: &[Vec<f64>], gamma: &[Vec<f64>], eps: f64) -> Moments {
    let (k, m) = (gamma[0].len(), z[0].len());
    let mut mass = vec![0.0; k];
    let mut mu = vec![vec![0.0; m]; k];
    for (zi, gi) in z.iter().zip(gamma) {
        for c in 0..k {
            mass[c] += gi[c];
            mu[c].iter_mut().zip(zi).for_each(|(a, v)| *a += gi[c] * v);
        }
    }
    mass.iter_mut().for_each(|s| *s = s.max(f64::MIN_POSITIVE));
    for c in 0..k {
        mu[c].iter_mut().for_each(|a| *a /= mass[c]);
    }
    let mut cov = vec![Tensor2::zeros(m, m); k];
    for (zi, gi) in z.iter().zip(gamma) {
        for c in 0..k {
            let d: Vec<f64> = zi.iter().zip(&mu[c]).map(|(a, b)| a - b).collect();
            let data = cov[c].data_mut();
            for r in 0..m {
                for s in 0..m {
                    data[r * m + s] += gi[c] * d[r] * d[s];
                }
            }
        }
    }
    for c in 0..k {
        let data = cov[c].data_mut();
        data.iter_mut().for_each(|v| *v /= mass[c]);
        for r in 0..m {
            data[r * m + r] += eps;
        }
    }
    let n = z.len() as f64;
    let phi = mass.iter().map(|s| s / n).collect();
    Moments { mass, phi, mu, cov }
}

impl Gmm {
    /// Mixture weights, means and `eps`-regularized covariances implied by
    /// memberships `gamma` (one row per sample, summing to 1).
    pub fn from_memberships(z: &[Vec<f64>], gamma: &[Vec<f64>], eps: f64) -> Result<Self> {
        let Moments { phi, mu, cov, .. } = moments(z, gamma, eps);
        let chol = cov.iter().map(cholesky).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { phi, mu, cov, chol })
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn mean(&self, k: usize) -> &[f64] {
        &self.mu[k]
    }

    pub fn covariance(&self, k: usize) -> &Tensor2 {
        &self.cov[k]
    }

    fn log_components(&self, z: &[f64]) -> Vec<f64> {
        let m = z.len() as f64;
        (0..self.phi.len())
            .map(|k| {
                let d: Vec<f64> = z.iter().zip(&self.mu[k]).map(|(a, b)| a - b).collect();
                let y = forward_substitute(&self.chol[k], &d);
                let maha: f64 = y.iter().map(|v| v * v).sum();
                self.phi[k].ln() - 0.5 * (m * (2.0 * PI).ln() + cholesky_log_det(&self.chol[k])) - 0.5 * maha
            })
            .collect()
    }

    /// Sample energy `-log Σ_k φ_k N(z; μ_k, Σ_k)`.
    pub fn energy(&self, z: &[f64]) -> f64 {
        -log_sum_exp(&self.log_components(z))
    }
}

/// Compression network, decoder and estimation network sharing one
/// parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DagmmNet {
    pub encoder: Mlp,
    pub decoder: Mlp,
    pub estimator: Mlp,
    pub n_params: usize,
}

impl DagmmNet {
    pub fn new(dim: usize, p: &DagmmParams) -> (Self, ParamBuilder) {
        let mut b = ParamBuilder::new();
        let encoder = Mlp {
            layers: vec![
                b.dense(dim, p.hidden, Activation::Tanh),
                b.dense(p.hidden, p.latent_dim, Activation::Identity),
            ],
        };
        let decoder = Mlp {
            layers: vec![
                b.dense(p.latent_dim, p.hidden, Activation::Tanh),
                b.dense(p.hidden, dim, Activation::Identity),
            ],
        };
        let estimator = Mlp {
            layers: vec![
                b.dense(p.latent_dim + 2, p.hidden, Activation::Tanh),
                b.dense(p.hidden, p.gmm_components, Activation::Identity),
            ],
        };
        let net = Self { encoder, decoder, estimator, n_params: b.len() };
        (net, b)
    }

    /// Latent code concatenated with the two reconstruction features.
    pub fn features(&self, params: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let mut z = self.encoder.predict(params, x)?;
        let xh = self.decoder.predict(params, &z)?;
        let (rel, cos) = recon_features(x, &xh);
        z.extend([rel, cos]);
        Ok(z)
    }

    pub fn memberships(&self, params: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        Ok(softmax(&self.estimator.predict(params, z)?))
    }
}

struct Pass {
    enc: MlpCache,
    dec: MlpCache,
    est: MlpCache,
    z: Vec<f64>,
    gamma: Vec<f64>,
}

/// Training objective on one batch: reconstruction MSE, weighted mean sample
/// energy and the inverse-diagonal covariance penalty. Gradients overwrite
/// `grads`.
pub fn batch_loss(net: &DagmmNet, params: &[f64], p: &DagmmParams, batch: &[&[f64]], grads: &mut [f64]) -> Result<f64> {
    grads.fill(0.0);
    let nb = batch.len() as f64;
    let passes = batch
        .iter()
        .map(|x| {
            let enc = net.encoder.forward(params, x)?;
            let dec = net.decoder.forward(params, enc.output())?;
            let (rel, cos) = recon_features(x, dec.output());
            let mut z = enc.output().to_vec();
            z.extend([rel, cos]);
            let est = net.estimator.forward(params, &z)?;
            let gamma = softmax(est.output());
            Ok(Pass { enc, dec, est, z, gamma })
        })
        .collect::<Result<Vec<_>>>()?;
    let z: Vec<Vec<f64>> = passes.iter().map(|q| q.z.clone()).collect();
    let gamma: Vec<Vec<f64>> = passes.iter().map(|q| q.gamma.clone()).collect();
    let Moments { mass, phi, mu, cov } = moments(&z, &gamma, p.cov_epsilon);
    let (k, m) = (phi.len(), z[0].len());
    let chol = cov.iter().map(cholesky).collect::<std::result::Result<Vec<_>, _>>()?;
    let inv: Vec<Tensor2> = chol.iter().map(cholesky_inverse).collect();
    let log_norm: Vec<f64> = chol.iter().map(|l| 0.5 * (m as f64 * (2.0 * PI).ln() + cholesky_log_det(l))).collect();

    let mut recon = 0.0;
    let mut energy = 0.0;
    let mut diffs = vec![vec![Vec::new(); k]; passes.len()];
    let mut solved = vec![vec![Vec::new(); k]; passes.len()];
    let mut post = vec![vec![0.0; k]; passes.len()];
    for (i, (x, q)) in batch.iter().zip(&passes).enumerate() {
        let xh = q.dec.output();
        recon += x.iter().zip(xh).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / x.len() as f64;
        let mut ell = vec![0.0; k];
        for c in 0..k {
            let d: Vec<f64> = q.z.iter().zip(&mu[c]).map(|(a, b)| a - b).collect();
            let u = inv[c].matvec(&d)?;
            let maha: f64 = d.iter().zip(&u).map(|(a, b)| a * b).sum();
            ell[c] = phi[c].ln() - log_norm[c] - 0.5 * maha;
            diffs[i][c] = d;
            solved[i][c] = u;
        }
        let lse = log_sum_exp(&ell);
        energy -= lse;
        for c in 0..k {
            post[i][c] = (ell[c] - lse).exp();
        }
    }
    let penalty: f64 = cov.iter().map(|s| (0..m).map(|j| 1.0 / s.get(j, j)).sum::<f64>()).sum();
    let loss = recon / nb + p.lambda_energy * energy / nb + p.lambda_covdiag * penalty;

    // w_ic = dLoss / d log-component
    let w: Vec<Vec<f64>> = post.iter().map(|r| r.iter().map(|v| -p.lambda_energy / nb * v).collect()).collect();
    let mut g_phi = vec![0.0; k];
    let mut g_mu = vec![vec![0.0; m]; k];
    let mut g_cov = vec![Tensor2::zeros(m, m); k];
    for c in 0..k {
        let mut w_sum = 0.0;
        for i in 0..passes.len() {
            let wi = w[i][c];
            w_sum += wi;
            g_phi[c] += wi / phi[c];
            g_mu[c].iter_mut().zip(&solved[i][c]).for_each(|(g, u)| *g += wi * u);
            let u = &solved[i][c];
            let data = g_cov[c].data_mut();
            for r in 0..m {
                for s in 0..m {
                    data[r * m + s] += 0.5 * wi * u[r] * u[s];
                }
            }
        }
        let data = g_cov[c].data_mut();
        for (g, v) in data.iter_mut().zip(inv[c].data()) {
            *g -= 0.5 * w_sum * v;
        }
        for j in 0..m {
            data[j * m + j] -= p.lambda_covdiag / cov[c].get(j, j).powi(2);
        }
    }
    // <GΣ, Σ - εI> per component
    let g_cov_dot: Vec<f64> = (0..k)
        .map(|c| {
            let mut s: f64 = g_cov[c].data().iter().zip(cov[c].data()).map(|(a, b)| a * b).sum();
            for j in 0..m {
                s -= g_cov[c].get(j, j) * p.cov_epsilon;
            }
            s
        })
        .collect();

    for (i, (x, q)) in batch.iter().zip(&passes).enumerate() {
        let mut dgamma = vec![0.0; k];
        let mut dz = vec![0.0; m];
        for c in 0..k {
            let d = &diffs[i][c];
            let gd = g_cov[c].matvec(d)?;
            let quad: f64 = d.iter().zip(&gd).map(|(a, b)| a * b).sum();
            let mu_dot: f64 = g_mu[c].iter().zip(d).map(|(a, b)| a * b).sum();
            dgamma[c] = g_phi[c] / nb + mu_dot / mass[c] + (quad - g_cov_dot[c]) / mass[c];
            let share = q.gamma[c] / mass[c];
            for j in 0..m {
                dz[j] += -w[i][c] * solved[i][c][j] + share * (g_mu[c][j] + 2.0 * gd[j]);
            }
        }
        let dot: f64 = q.gamma.iter().zip(&dgamma).map(|(a, b)| a * b).sum();
        let dlogits: Vec<f64> = q.gamma.iter().zip(&dgamma).map(|(g, d)| g * (d - dot)).collect();
        let dz_est = net.estimator.backward(params, &q.est, &dlogits, grads)?;
        dz.iter_mut().zip(&dz_est).for_each(|(a, b)| *a += b);

        let latent = m - 2;
        let xh = q.dec.output();
        let (drel, dcos) = recon_feature_grads(x, xh);
        let scale = 2.0 / (nb * x.len() as f64);
        let dxh: Vec<f64> =
            (0..x.len()).map(|j| scale * (xh[j] - x[j]) + dz[latent] * drel[j] + dz[latent + 1] * dcos[j]).collect();
        let dlatent = net.decoder.backward(params, &q.dec, &dxh, grads)?;
        let dcode: Vec<f64> = dz[..latent].iter().zip(&dlatent).map(|(a, b)| a + b).collect();
        net.encoder.backward(params, &q.enc, &dcode, grads)?;
    }
    Ok(loss)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DagmmModel {
    scaler: MinMaxScaler,
    net: DagmmNet,
    params: Vec<f64>,
    gmm: Gmm,
}

impl DagmmModel {
    pub fn fit(p: &DagmmParams, points: &Points, seed: RngSeed) -> Result<Self> {
        if points.len() < 2 {
            return Err(DetectError::TooFewRows { algorithm: "DAGMM", needed: 2, got: points.len() });
        }
        let scaler = MinMaxScaler::fit(points);
        let data: Vec<Vec<f64>> = points.rows().map(|r| scaler.transform(r)).collect();
        let (net, builder) = DagmmNet::new(points.dim(), p);
        let mut params = builder.build(&mut seed.stream(0));
        let mut adam = Adam::new(params.len()).with_learning_rate(p.learning_rate);
        let mut grads = vec![0.0; params.len()];
        let mut rng = seed.stream(1);
        for _ in 0..p.epochs {
            for idx in batches(data.len(), p.batch, &mut rng) {
                if idx.len() < 2 {
                    continue;
                }
                let batch: Vec<&[f64]> = idx.iter().map(|&i| data[i].as_slice()).collect();
                batch_loss(&net, &params, p, &batch, &mut grads)?;
                adam.step(&mut params, &grads);
            }
        }
        let z = data.iter().map(|x| net.features(&params, x)).collect::<Result<Vec<_>>>()?;
        let gamma = z.iter().map(|zi| net.memberships(&params, zi)).collect::<Result<Vec<_>>>()?;
        let gmm = Gmm::from_memberships(&z, &gamma, p.cov_epsilon)?;
        Ok(Self { scaler, net, params, gmm })
    }

    pub fn gmm(&self) -> &Gmm {
        &self.gmm
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        let z = self.net.features(&self.params, &self.scaler.transform(x)).expect("dimension checked by the caller");
        self.gmm.energy(&z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_component_energy_at_mean() {
        let z = vec![vec![0.0, 1.0], vec![2.0, 0.0], vec![1.0, 2.0]];
        let gamma = vec![vec![1.0]; 3];
        let gmm = Gmm::from_memberships(&z, &gamma, 1e-6).unwrap();
        let s = gmm.covariance(0);
        let det = s.get(0, 0) * s.get(1, 1) - s.get(0, 1) * s.get(1, 0);
        let expect = -gmm.phi()[0].ln() + 0.5 * ((2.0 * PI).powi(2) * det).ln();
        assert!((gmm.energy(gmm.mean(0)) - expect).abs() < 1e-9);
    }

    #[test]
    fn uniform_memberships_from_zero_logits() {
        assert_eq!(softmax(&[0.0; 4]), vec![0.25; 4]);
    }

    #[test]
    fn mixture_weights_sum_to_one() {
        let z: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64, (i * i) as f64 * 0.1]).collect();
        let gamma: Vec<Vec<f64>> = (0..7).map(|i| softmax(&[i as f64 * 0.3, -0.2, 1.0])).collect();
        let gmm = Gmm::from_memberships(&z, &gamma, 1e-6).unwrap();
        assert!((gmm.phi().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
