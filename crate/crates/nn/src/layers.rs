use serde::{Deserialize, Serialize};

use crate::error::{expect_len, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Identity,
    Tanh,
    Sigmoid,
    Relu,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Tanh => x.tanh(),
            Activation::Sigmoid => sigmoid(x),
            Activation::Relu => x.max(0.0),
        }
    }

    /// Derivative expressed through the activation's output `y`.
    #[inline]
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Tanh => 1.0 - y * y,
            Activation::Sigmoid => y * (1.0 - y),
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[inline]
pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Fully connected layer `y = act(W x + b)`; `W` is `output x input`,
/// row-major, stored at `offset` in the parameter vector with `b` right after.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dense {
    pub input: usize,
    pub output: usize,
    pub activation: Activation,
    pub(crate) offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseCache {
    pub input: Vec<f64>,
    pub output: Vec<f64>,
}

impl Dense {
    pub fn n_params(&self) -> usize {
        self.output * (self.input + 1)
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn weights<'a>(&self, params: &'a [f64]) -> &'a [f64] {
        &params[self.offset..self.offset + self.output * self.input]
    }

    pub fn bias<'a>(&self, params: &'a [f64]) -> &'a [f64] {
        let start = self.offset + self.output * self.input;
        &params[start..start + self.output]
    }

    pub fn forward(&self, params: &[f64], x: &[f64]) -> Result<DenseCache> {
        expect_len("dense input", x.len(), self.input)?;
        let w = self.weights(params);
        let b = self.bias(params);
        let output = w
            .chunks_exact(self.input.max(1))
            .take(self.output)
            .zip(b)
            .map(|(row, bias)| {
                let z: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + bias;
                self.activation.apply(z)
            })
            .collect();
        Ok(DenseCache { input: x.to_vec(), output })
    }

    /// Accumulates parameter gradients into `grads` and returns `dL/dx`.
    pub fn backward(
        &self,
        params: &[f64],
        cache: &DenseCache,
        grad_out: &[f64],
        grads: &mut [f64],
    ) -> Result<Vec<f64>> {
        expect_len("dense output gradient", grad_out.len(), self.output)?;
        let w = self.weights(params);
        let mut grad_in = vec![0.0; self.input];
        let bias_start = self.offset + self.output * self.input;
        for o in 0..self.output {
            let dz = grad_out[o] * self.activation.derivative_from_output(cache.output[o]);
            if dz == 0.0 {
                continue;
            }
            grads[bias_start + o] += dz;
            let row = o * self.input;
            let gw = &mut grads[self.offset + row..self.offset + row + self.input];
            for (g, x) in gw.iter_mut().zip(&cache.input) {
                *g += dz * x;
            }
            for (gi, wv) in grad_in.iter_mut().zip(&w[row..row + self.input]) {
                *gi += dz * wv;
            }
        }
        Ok(grad_in)
    }
}

/// `activation(W x + b)` for a single layer.
pub fn dense_forward(layer: &Dense, params: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    layer.forward(params, x).map(|c| c.output)
}

/// A stack of dense layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mlp {
    pub layers: Vec<Dense>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpCache {
    pub layers: Vec<DenseCache>,
}

impl MlpCache {
    pub fn output(&self) -> &[f64] {
        &self.layers.last().expect("an mlp has at least one layer").output
    }
}

impl Mlp {
    pub fn input(&self) -> usize {
        self.layers[0].input
    }

    pub fn output(&self) -> usize {
        self.layers.last().expect("an mlp has at least one layer").output
    }

    pub fn forward(&self, params: &[f64], x: &[f64]) -> Result<MlpCache> {
        let mut caches: Vec<DenseCache> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let input = caches.last().map(|c| c.output.as_slice()).unwrap_or(x);
            let cache = layer.forward(params, input)?;
            caches.push(cache);
        }
        Ok(MlpCache { layers: caches })
    }

    pub fn predict(&self, params: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let mut h = x.to_vec();
        for layer in &self.layers {
            h = dense_forward(layer, params, &h)?;
        }
        Ok(h)
    }

    pub fn backward(&self, params: &[f64], cache: &MlpCache, grad_out: &[f64], grads: &mut [f64]) -> Result<Vec<f64>> {
        let mut g = grad_out.to_vec();
        for (layer, c) in self.layers.iter().zip(&cache.layers).rev() {
            g = layer.backward(params, c, &g, grads)?;
        }
        Ok(g)
    }
}

/// Mean squared error and its gradient with respect to `pred`.
pub fn mse(pred: &[f64], target: &[f64]) -> (f64, Vec<f64>) {
    let n = pred.len() as f64;
    let mut loss = 0.0;
    let grad = pred
        .iter()
        .zip(target)
        .map(|(p, t)| {
            let d = p - t;
            loss += d * d;
            2.0 * d / n
        })
        .collect();
    (loss / n, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ParamBuilder;

    #[test]
    fn zero_layer_outputs_zero() {
        let mut pb = ParamBuilder::new();
        let layer = pb.dense(3, 2, Activation::Identity);
        let params = vec![0.0; pb.len()];
        assert_eq!(dense_forward(&layer, &params, &[1.0, 2.0, 3.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn identity_weights_pass_through() {
        let mut pb = ParamBuilder::new();
        let layer = pb.dense(2, 2, Activation::Identity);
        let params = vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        assert_eq!(pb.len(), params.len());
        assert_eq!(dense_forward(&layer, &params, &[4.0, -7.0]).unwrap(), vec![4.0, -7.0]);
    }

    #[test]
    fn relu_clamps() {
        let mut pb = ParamBuilder::new();
        let layer = pb.dense(1, 1, Activation::Relu);
        assert_eq!(dense_forward(&layer, &[2.0, 1.0], &[-3.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn shape_mismatch_errors() {
        let mut pb = ParamBuilder::new();
        let layer = pb.dense(2, 1, Activation::Tanh);
        assert!(dense_forward(&layer, &[0.0; 3], &[1.0]).is_err());
    }

    #[test]
    fn one_dimensional_squared_loss_gradient() {
        // L = (w x + b - y)^2 so dL/dw = 2 (w x + b - y) x
        let mut pb = ParamBuilder::new();
        let layer = pb.dense(1, 1, Activation::Identity);
        let (w, b, x, y) = (0.7, -0.2, 1.5, 2.0);
        let params = vec![w, b];
        let cache = layer.forward(&params, &[x]).unwrap();
        let r = cache.output[0] - y;
        let mut grads = vec![0.0; 2];
        layer.backward(&params, &cache, &[2.0 * r], &mut grads).unwrap();
        assert!((grads[0] - 2.0 * (w * x + b - y) * x).abs() < 1e-15);
        assert!((grads[1] - 2.0 * (w * x + b - y)).abs() < 1e-15);
    }

    #[test]
    fn perfect_reconstruction_has_zero_gradient() {
        let mut pb = ParamBuilder::new();
        let mlp = Mlp { layers: vec![pb.dense(2, 2, Activation::Identity)] };
        let params = vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        let x = [0.3, -0.8];
        let cache = mlp.forward(&params, &x).unwrap();
        let (loss, dy) = mse(cache.output(), &x);
        let mut grads = vec![0.0; params.len()];
        mlp.backward(&params, &cache, &dy, &mut grads).unwrap();
        assert_eq!(loss, 0.0);
        assert!(grads.iter().all(|&g| g == 0.0));
    }
}
