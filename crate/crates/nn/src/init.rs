use rand::Rng;

use crate::layers::{Activation, Dense};
use crate::lstm::LstmCell;

#[derive(Debug, Clone, Copy)]
enum Init {
    /// uniform(-s, s) with s = sqrt(6 / (fan_in + fan_out))
    Glorot {
        offset: usize,
        len: usize,
        fan_in: usize,
        fan_out: usize,
    },
    Constant {
        offset: usize,
        len: usize,
        value: f64,
    },
}

/// Lays out layers in one flat parameter vector and initialises it.
#[derive(Debug, Default)]
pub struct ParamBuilder {
    len: usize,
    rules: Vec<Init>,
}

impl ParamBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dense(&mut self, input: usize, output: usize, activation: Activation) -> Dense {
        let layer = Dense { input, output, activation, offset: self.len };
        self.rules.push(Init::Glorot { offset: self.len, len: input * output, fan_in: input, fan_out: output });
        self.rules.push(Init::Constant { offset: self.len + input * output, len: output, value: 0.0 });
        self.len += layer.n_params();
        layer
    }

    /// Gate weights use fan_out = hidden; the forget-gate bias starts at 1.
    pub fn lstm(&mut self, input: usize, hidden: usize) -> LstmCell {
        let cell = LstmCell::at_offset(input, hidden, self.len);
        let w_len = 4 * hidden * (input + hidden);
        self.rules.push(Init::Glorot { offset: self.len, len: w_len, fan_in: input + hidden, fan_out: hidden });
        let b = self.len + w_len;
        self.rules.push(Init::Constant { offset: b, len: hidden, value: 0.0 });
        self.rules.push(Init::Constant { offset: b + hidden, len: hidden, value: 1.0 });
        self.rules.push(Init::Constant { offset: b + 2 * hidden, len: 2 * hidden, value: 0.0 });
        self.len += cell.n_params();
        cell
    }

    pub fn build(&self, rng: &mut impl Rng) -> Vec<f64> {
        let mut params = vec![0.0; self.len];
        for rule in &self.rules {
            match *rule {
                Init::Glorot { offset, len, fan_in, fan_out } => {
                    let s = (6.0 / (fan_in + fan_out) as f64).sqrt();
                    for p in &mut params[offset..offset + len] {
                        *p = rng.random_range(-s..=s);
                    }
                }
                Init::Constant { offset, len, value } => {
                    params[offset..offset + len].fill(value);
                }
            }
        }
        params
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use odkit_core::RngSeed;

    #[test]
    fn glorot_bounds_and_forget_bias() {
        let mut pb = ParamBuilder::new();
        let dense = pb.dense(4, 3, Activation::Tanh);
        let cell = pb.lstm(2, 5);
        let p = pb.build(&mut RngSeed(1).stream(0));
        let s = (6.0f64 / 7.0).sqrt();
        assert!(dense.weights(&p).iter().all(|w| w.abs() <= s));
        assert!(dense.bias(&p).iter().all(|&b| b == 0.0));
        let b = cell.bias(&p);
        assert!(b[5..10].iter().all(|&v| v == 1.0));
        assert!(b[..5].iter().chain(&b[10..]).all(|&v| v == 0.0));
    }

    #[test]
    fn seeded_build_is_deterministic() {
        let mut pb = ParamBuilder::new();
        pb.dense(3, 3, Activation::Identity);
        assert_eq!(pb.build(&mut RngSeed(9).stream(2)), pb.build(&mut RngSeed(9).stream(2)));
    }
}
