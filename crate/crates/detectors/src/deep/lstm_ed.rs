use odkit_core::RngSeed;
use odkit_nn::linalg::Gaussian;
use odkit_nn::{Activation, Adam, Dense, DenseCache, LstmCache, LstmCell, ParamBuilder};
use serde::{Deserialize, Serialize};

use super::common::{batches, ZScaler};
use crate::error::{DetectError, Result};
use crate::shallow::Points;
use crate::spec::LstmEdParams;

/// Encoder LSTM whose final state seeds a decoder LSTM that reconstructs the
/// window last row first. The decoder reads the true rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmEdNet {
    pub encoder: LstmCell,
    pub decoder: LstmCell,
    pub head: Dense,
    pub window: usize,
    pub dim: usize,
}

struct Trace {
    enc: Vec<LstmCache>,
    dec: Vec<LstmCache>,
    /// Head outputs in decoding order: rows `w-1, w-2, …, 0`.
    heads: Vec<DenseCache>,
}

impl LstmEdNet {
    pub fn new(dim: usize, p: &LstmEdParams) -> (Self, ParamBuilder) {
        let mut b = ParamBuilder::new();
        let encoder = b.lstm(dim, p.hidden);
        let decoder = b.lstm(dim, p.hidden);
        let head = b.dense(p.hidden, dim, Activation::Identity);
        (Self { encoder, decoder, head, window: p.window, dim }, b)
    }

    fn trace(&self, params: &[f64], window: &[f64]) -> Result<Trace> {
        let rows: Vec<&[f64]> = window.chunks_exact(self.dim).collect();
        let (mut h, mut c) = self.encoder.zero_state();
        let mut enc = Vec::with_capacity(rows.len());
        for x in &rows {
            let cache = self.encoder.step(params, x, &h, &c)?;
            h.clone_from(&cache.h);
            c.clone_from(&cache.c);
            enc.push(cache);
        }
        let mut heads = vec![self.head.forward(params, &h)?];
        let mut dec = Vec::with_capacity(rows.len() - 1);
        for x in rows[1..].iter().rev() {
            let cache = self.decoder.step(params, x, &h, &c)?;
            h.clone_from(&cache.h);
            c.clone_from(&cache.c);
            heads.push(self.head.forward(params, &h)?);
            dec.push(cache);
        }
        Ok(Trace { enc, dec, heads })
    }

    /// Reconstruction of `window` in original row order.
    pub fn reconstruct(&self, params: &[f64], window: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mut out: Vec<Vec<f64>> = self.trace(params, window)?.heads.into_iter().map(|h| h.output).collect();
        out.reverse();
        Ok(out)
    }
}

/// Mean over windows (given by start row) of the per-window reconstruction
/// MSE; gradients overwrite `grads`.
pub fn batch_loss(net: &LstmEdNet, params: &[f64], series: &[f64], starts: &[usize], grads: &mut [f64]) -> Result<f64> {
    grads.fill(0.0);
    let (w, d) = (net.window, net.dim);
    let inv = 1.0 / starts.len() as f64;
    let coef = 2.0 * inv / (w * d) as f64;
    let mut total = 0.0;
    for &s in starts {
        let window = &series[s * d..(s + w) * d];
        let tr = net.trace(params, window)?;
        let mut dout = Vec::with_capacity(w);
        for (k, head) in tr.heads.iter().enumerate() {
            let row = &window[(w - 1 - k) * d..(w - k) * d];
            let g: Vec<f64> = head
                .output
                .iter()
                .zip(row)
                .map(|(a, b)| {
                    total += (a - b) * (a - b) * inv / (w * d) as f64;
                    coef * (a - b)
                })
                .collect();
            dout.push(g);
        }
        let mut dh = vec![0.0; net.decoder.hidden];
        let mut dc = vec![0.0; net.decoder.hidden];
        for k in (1..w).rev() {
            let dh_head = net.head.backward(params, &tr.heads[k], &dout[k], grads)?;
            dh.iter_mut().zip(&dh_head).for_each(|(a, b)| *a += b);
            let step = net.decoder.backward(params, &tr.dec[k - 1], &dh, &dc, grads);
            dh = step.dh_prev;
            dc = step.dc_prev;
        }
        let dh_head = net.head.backward(params, &tr.heads[0], &dout[0], grads)?;
        dh.iter_mut().zip(&dh_head).for_each(|(a, b)| *a += b);
        for cache in tr.enc.iter().rev() {
            let step = net.encoder.backward(params, cache, &dh, &dc, grads);
            dh = step.dh_prev;
            dc = step.dc_prev;
        }
    }
    Ok(total)
}

fn window_starts(n: usize, w: usize, stride: usize) -> Vec<usize> {
    if n < w {
        return Vec::new();
    }
    (0..=n - w).step_by(stride).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmEdModel {
    scaler: ZScaler,
    net: LstmEdNet,
    params: Vec<f64>,
    stride: usize,
    errors: Gaussian,
}

impl LstmEdModel {
    pub fn fit(p: &LstmEdParams, points: &Points, seed: RngSeed) -> Result<Self> {
        if points.len() < p.window {
            return Err(DetectError::TooFewRows { algorithm: "LSTMED", needed: p.window, got: points.len() });
        }
        let scaler = ZScaler::fit(points);
        let scaled = scaler.transform_points(points);
        let series = scaled.data();
        let (net, builder) = LstmEdNet::new(points.dim(), p);
        let mut params = builder.build(&mut seed.stream(0));
        let mut adam = Adam::new(params.len()).with_learning_rate(p.learning_rate);
        let mut grads = vec![0.0; params.len()];
        let starts = window_starts(points.len(), p.window, p.stride);
        let mut rng = seed.stream(1);
        for _ in 0..p.epochs {
            for idx in batches(starts.len(), p.batch, &mut rng) {
                let batch: Vec<usize> = idx.iter().map(|&i| starts[i]).collect();
                batch_loss(&net, &params, series, &batch, &mut grads)?;
                adam.step(&mut params, &grads);
            }
        }
        let mut errs = Vec::new();
        for &s in &starts {
            errs.extend(step_errors(&net, &params, series, s)?);
        }
        let errors = Gaussian::fit(errs.iter().map(Vec::as_slice), points.dim(), p.cov_epsilon)?;
        Ok(Self { scaler, net, params, stride: p.stride, errors })
    }

    pub fn window(&self) -> usize {
        self.net.window
    }

    /// Per-row mean Mahalanobis distance over the windows covering the row;
    /// uncovered rows are 0.
    pub fn score_series(&self, points: &Points) -> Result<Vec<f64>> {
        let (n, w) = (points.len(), self.net.window);
        if n < w {
            return Err(DetectError::TooFewRows { algorithm: "LSTMED", needed: w, got: n });
        }
        let scaled = self.scaler.transform_points(points);
        let mut sum = vec![0.0; n];
        let mut count = vec![0usize; n];
        for s in window_starts(n, w, self.stride) {
            for (k, e) in step_errors(&self.net, &self.params, scaled.data(), s)?.iter().enumerate() {
                sum[s + k] += self.errors.mahalanobis(e);
                count[s + k] += 1;
            }
        }
        Ok(sum.iter().zip(&count).map(|(s, &c)| if c == 0 { 0.0 } else { s / c as f64 }).collect())
    }
}

fn step_errors(net: &LstmEdNet, params: &[f64], series: &[f64], start: usize) -> Result<Vec<Vec<f64>>> {
    let d = net.dim;
    let window = &series[start * d..(start + net.window) * d];
    let recon = net.reconstruct(params, window)?;
    Ok(window.chunks_exact(d).zip(recon).map(|(x, r)| x.iter().zip(&r).map(|(a, b)| a - b).collect()).collect())
}
