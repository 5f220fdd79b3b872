use odkit_core::RngSeed;
use odkit_nn::linalg::Gaussian;
use odkit_nn::{mse, Activation, Adam, Dense, LstmCache, LstmCell, ParamBuilder};
use serde::{Deserialize, Serialize};

use super::common::{batches, scale, ZScaler};
use crate::error::{DetectError, Result};
use crate::shallow::Points;
use crate::spec::LstmAdParams;

/// LSTM over a history window followed by a linear head predicting the next
/// `ahead` rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmAdNet {
    pub cell: LstmCell,
    pub head: Dense,
    pub window: usize,
    pub ahead: usize,
    pub dim: usize,
}

impl LstmAdNet {
    pub fn new(dim: usize, p: &LstmAdParams) -> (Self, ParamBuilder) {
        let mut b = ParamBuilder::new();
        let cell = b.lstm(dim, p.hidden);
        let head = b.dense(p.hidden, p.predict_ahead * dim, Activation::Identity);
        (Self { cell, head, window: p.window, ahead: p.predict_ahead, dim }, b)
    }

    fn run(&self, params: &[f64], history: &[f64]) -> Result<Vec<LstmCache>> {
        let (mut h, mut c) = self.cell.zero_state();
        let mut caches = Vec::with_capacity(self.window);
        for x in history.chunks_exact(self.dim) {
            let cache = self.cell.step(params, x, &h, &c)?;
            h.clone_from(&cache.h);
            c.clone_from(&cache.c);
            caches.push(cache);
        }
        Ok(caches)
    }

    /// Prediction for origin `t`: reads rows `t-w..t` of `series`.
    pub fn predict(&self, params: &[f64], series: &[f64], t: usize) -> Result<Vec<f64>> {
        let d = self.dim;
        let caches = self.run(params, &series[(t - self.window) * d..t * d])?;
        Ok(self.head.forward(params, &caches.last().expect("window >= 2").h)?.output)
    }

    /// Target rows `t..t+ahead`, flattened.
    pub fn target<'a>(&self, series: &'a [f64], t: usize) -> &'a [f64] {
        &series[t * self.dim..(t + self.ahead) * self.dim]
    }

    /// Valid prediction origins for a series of `n` rows.
    pub fn origins(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        self.window..=n.saturating_sub(self.ahead)
    }
}

/// Mean over `origins` of the prediction MSE; gradients overwrite `grads`.
pub fn batch_loss(
    net: &LstmAdNet,
    params: &[f64],
    series: &[f64],
    origins: &[usize],
    grads: &mut [f64],
) -> Result<f64> {
    grads.fill(0.0);
    let inv = 1.0 / origins.len() as f64;
    let d = net.dim;
    let mut total = 0.0;
    for &t in origins {
        let caches = net.run(params, &series[(t - net.window) * d..t * d])?;
        let last = caches.last().expect("window >= 2");
        let head = net.head.forward(params, &last.h)?;
        let (loss, mut g) = mse(&head.output, net.target(series, t));
        total += loss * inv;
        scale(&mut g, inv);
        let mut dh = net.head.backward(params, &head, &g, grads)?;
        let mut dc = vec![0.0; net.cell.hidden];
        for cache in caches.iter().rev() {
            let step = net.cell.backward(params, cache, &dh, &dc, grads);
            dh = step.dh_prev;
            dc = step.dc_prev;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmAdModel {
    scaler: ZScaler,
    net: LstmAdNet,
    params: Vec<f64>,
    errors: Gaussian,
}

impl LstmAdModel {
    pub fn fit(p: &LstmAdParams, points: &Points, seed: RngSeed) -> Result<Self> {
        let needed = p.window + p.predict_ahead;
        if points.len() < needed {
            return Err(DetectError::TooFewRows { algorithm: "LSTMAD", needed, got: points.len() });
        }
        let scaler = ZScaler::fit(points);
        let series = scaler.transform_points(points);
        let series = series.data();
        let (net, builder) = LstmAdNet::new(points.dim(), p);
        let mut params = builder.build(&mut seed.stream(0));
        let mut adam = Adam::new(params.len()).with_learning_rate(p.learning_rate);
        let mut grads = vec![0.0; params.len()];
        let origins: Vec<usize> = net.origins(points.len()).collect();
        let mut rng = seed.stream(1);
        for _ in 0..p.epochs {
            for idx in batches(origins.len(), p.batch, &mut rng) {
                let batch: Vec<usize> = idx.iter().map(|&i| origins[i]).collect();
                batch_loss(&net, &params, series, &batch, &mut grads)?;
                adam.step(&mut params, &grads);
            }
        }
        let errs = origins.iter().map(|&t| error_vector(&net, &params, series, t)).collect::<Result<Vec<_>>>()?;
        let errors = Gaussian::fit(errs.iter().map(Vec::as_slice), p.predict_ahead * points.dim(), p.cov_epsilon)?;
        Ok(Self { scaler, net, params, errors })
    }

    pub fn window(&self) -> usize {
        self.net.window
    }

    /// One score per row; rows without a full history and a full target are 0.
    pub fn score_series(&self, points: &Points) -> Result<Vec<f64>> {
        let n = points.len();
        let needed = self.net.window + self.net.ahead;
        if n < needed {
            return Err(DetectError::TooFewRows { algorithm: "LSTMAD", needed, got: n });
        }
        let series = self.scaler.transform_points(points);
        let mut scores = vec![0.0; n];
        for t in self.net.origins(n) {
            let e = error_vector(&self.net, &self.params, series.data(), t)?;
            scores[t] = self.errors.mahalanobis(&e);
        }
        Ok(scores)
    }
}

fn error_vector(net: &LstmAdNet, params: &[f64], series: &[f64], t: usize) -> Result<Vec<f64>> {
    let pred = net.predict(params, series, t)?;
    Ok(net.target(series, t).iter().zip(&pred).map(|(a, b)| a - b).collect())
}
