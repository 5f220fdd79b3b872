use odkit_core::RngSeed;
use odkit_nn::{mse, Activation, Adam, Mlp, ParamBuilder};
use serde::{Deserialize, Serialize};

use super::common::{batches, scale, MinMaxScaler};
use crate::error::{DetectError, Result};
use crate::shallow::Points;
use crate::spec::AutoencoderParams;

/// `d → hidden… → d` with tanh hidden layers and a linear output.
pub fn architecture(dim: usize, hidden: &[usize], builder: &mut ParamBuilder) -> Mlp {
    let mut layers = Vec::with_capacity(hidden.len() + 1);
    let mut input = dim;
    for &h in hidden {
        layers.push(builder.dense(input, h, Activation::Tanh));
        input = h;
    }
    layers.push(builder.dense(input, dim, Activation::Identity));
    Mlp { layers }
}

pub fn default_hidden(dim: usize) -> Vec<usize> {
    vec![dim, (dim / 2).max(1), dim]
}

/// Mean over `batch` of the per-row mean squared reconstruction error.
/// Gradients are written to `grads` (overwritten, not accumulated).
pub fn batch_loss(net: &Mlp, params: &[f64], batch: &[&[f64]], grads: &mut [f64]) -> Result<f64> {
    grads.fill(0.0);
    let mut total = 0.0;
    let inv = 1.0 / batch.len() as f64;
    for x in batch {
        let cache = net.forward(params, x)?;
        let (loss, mut g) = mse(cache.output(), x);
        scale(&mut g, inv);
        net.backward(params, &cache, &g, grads)?;
        total += loss * inv;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoencoderModel {
    scaler: MinMaxScaler,
    net: Mlp,
    params: Vec<f64>,
}

impl AutoencoderModel {
    pub fn fit(p: &AutoencoderParams, points: &Points, seed: RngSeed) -> Result<Self> {
        if points.is_empty() {
            return Err(DetectError::TooFewRows { algorithm: "AUTOENCODER", needed: 1, got: 0 });
        }
        let scaler = MinMaxScaler::fit(points);
        let data: Vec<Vec<f64>> = points.rows().map(|r| scaler.transform(r)).collect();
        let hidden = p.hidden_sizes.clone().unwrap_or_else(|| default_hidden(points.dim()));
        let mut builder = ParamBuilder::new();
        let net = architecture(points.dim(), &hidden, &mut builder);
        let mut params = builder.build(&mut seed.stream(0));
        let mut adam = Adam::new(params.len()).with_learning_rate(p.learning_rate);
        let mut grads = vec![0.0; params.len()];
        let mut rng = seed.stream(1);
        for _ in 0..p.epochs {
            for idx in batches(data.len(), p.batch, &mut rng) {
                let batch: Vec<&[f64]> = idx.iter().map(|&i| data[i].as_slice()).collect();
                batch_loss(&net, &params, &batch, &mut grads)?;
                adam.step(&mut params, &grads);
            }
        }
        Ok(Self { scaler, net, params })
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        let z = self.scaler.transform(x);
        let out = self.net.predict(&self.params, &z).expect("dimension checked by the caller");
        mse(&out, &z).0
    }
}
