use serde::{Deserialize, Serialize};

use crate::error::{expect_len, Result};
use crate::layers::sigmoid;

/// LSTM cell. Gate rows are stacked `[input, forget, output, candidate]`,
/// each `hidden` rows of a `4*hidden x (input + hidden)` matrix acting on
/// `[x; h]`, followed by a `4*hidden` bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LstmCell {
    pub input: usize,
    pub hidden: usize,
    offset: usize,
}

/// Everything the backward pass needs from one step.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmCache {
    xh: Vec<f64>,
    c_prev: Vec<f64>,
    i: Vec<f64>,
    f: Vec<f64>,
    o: Vec<f64>,
    g: Vec<f64>,
    tanh_c: Vec<f64>,
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

/// Gradients flowing out of one backward step.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmGrad {
    pub dx: Vec<f64>,
    pub dh_prev: Vec<f64>,
    pub dc_prev: Vec<f64>,
}

impl LstmCell {
    pub(crate) fn at_offset(input: usize, hidden: usize, offset: usize) -> Self {
        Self { input, hidden, offset }
    }

    pub fn n_params(&self) -> usize {
        4 * self.hidden * (self.input + self.hidden + 1)
    }

    fn w_len(&self) -> usize {
        4 * self.hidden * (self.input + self.hidden)
    }

    pub fn weights<'a>(&self, params: &'a [f64]) -> &'a [f64] {
        &params[self.offset..self.offset + self.w_len()]
    }

    pub fn bias<'a>(&self, params: &'a [f64]) -> &'a [f64] {
        let s = self.offset + self.w_len();
        &params[s..s + 4 * self.hidden]
    }

    pub fn zero_state(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0; self.hidden], vec![0.0; self.hidden])
    }

    pub fn step(&self, params: &[f64], x: &[f64], h: &[f64], c: &[f64]) -> Result<LstmCache> {
        expect_len("lstm input", x.len(), self.input)?;
        expect_len("lstm hidden state", h.len(), self.hidden)?;
        expect_len("lstm cell state", c.len(), self.hidden)?;
        let hs = self.hidden;
        let width = self.input + hs;
        let mut xh = Vec::with_capacity(width);
        xh.extend_from_slice(x);
        xh.extend_from_slice(h);

        let w = self.weights(params);
        let b = self.bias(params);
        let mut pre = b.to_vec();
        for (r, p) in pre.iter_mut().enumerate() {
            let row = &w[r * width..(r + 1) * width];
            *p += row.iter().zip(&xh).map(|(a, v)| a * v).sum::<f64>();
        }
        let i: Vec<f64> = pre[..hs].iter().map(|&z| sigmoid(z)).collect();
        let f: Vec<f64> = pre[hs..2 * hs].iter().map(|&z| sigmoid(z)).collect();
        let o: Vec<f64> = pre[2 * hs..3 * hs].iter().map(|&z| sigmoid(z)).collect();
        let g: Vec<f64> = pre[3 * hs..].iter().map(|z| z.tanh()).collect();
        let c_new: Vec<f64> = (0..hs).map(|k| f[k] * c[k] + i[k] * g[k]).collect();
        let tanh_c: Vec<f64> = c_new.iter().map(|v| v.tanh()).collect();
        let h_new = (0..hs).map(|k| o[k] * tanh_c[k]).collect();
        Ok(LstmCache { xh, c_prev: c.to_vec(), i, f, o, g, tanh_c, h: h_new, c: c_new })
    }

    /// Backpropagates `dh`/`dc` (gradients w.r.t. this step's outputs) through
    /// the step, accumulating into `grads`.
    pub fn backward(&self, params: &[f64], cache: &LstmCache, dh: &[f64], dc: &[f64], grads: &mut [f64]) -> LstmGrad {
        let hs = self.hidden;
        let width = self.input + hs;
        let mut da = vec![0.0; 4 * hs];
        let mut dc_prev = vec![0.0; hs];
        for k in 0..hs {
            let d_o = dh[k] * cache.tanh_c[k];
            let dct = dc[k] + dh[k] * cache.o[k] * (1.0 - cache.tanh_c[k] * cache.tanh_c[k]);
            let di = dct * cache.g[k];
            let dg = dct * cache.i[k];
            let df = dct * cache.c_prev[k];
            dc_prev[k] = dct * cache.f[k];
            da[k] = di * cache.i[k] * (1.0 - cache.i[k]);
            da[hs + k] = df * cache.f[k] * (1.0 - cache.f[k]);
            da[2 * hs + k] = d_o * cache.o[k] * (1.0 - cache.o[k]);
            da[3 * hs + k] = dg * (1.0 - cache.g[k] * cache.g[k]);
        }
        let w = self.weights(params);
        let mut dxh = vec![0.0; width];
        let b_off = self.offset + self.w_len();
        for (r, &d) in da.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            grads[b_off + r] += d;
            let start = self.offset + r * width;
            for (gw, v) in grads[start..start + width].iter_mut().zip(&cache.xh) {
                *gw += d * v;
            }
            for (acc, wv) in dxh.iter_mut().zip(&w[r * width..(r + 1) * width]) {
                *acc += d * wv;
            }
        }
        let dh_prev = dxh.split_off(self.input);
        LstmGrad { dx: dxh, dh_prev, dc_prev }
    }
}

/// One LSTM step: `(h', c')` from input `x` and state `(h, c)`.
pub fn lstm_step(cell: &LstmCell, params: &[f64], x: &[f64], h: &[f64], c: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    cell.step(params, x, h, c).map(|s| (s.h, s.c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ParamBuilder;

    #[test]
    fn zero_weights_zero_state() {
        let mut pb = ParamBuilder::new();
        let cell = pb.lstm(2, 3);
        let params = vec![0.0; pb.len()];
        let s = cell.step(&params, &[0.4, -1.0], &[0.0; 3], &[0.0; 3]).unwrap();
        assert!(s.i.iter().chain(&s.f).chain(&s.o).all(|&v| v == 0.5));
        assert!(s.g.iter().all(|&v| v == 0.0));
        assert_eq!(s.c, vec![0.0; 3]);
        assert_eq!(s.h, vec![0.0; 3]);
    }

    #[test]
    fn saturated_forget_gate_keeps_cell() {
        let mut pb = ParamBuilder::new();
        let cell = pb.lstm(1, 2);
        let mut params = vec![0.0; pb.len()];
        let b = pb.len() - 8;
        params[b + 2] = 40.0;
        params[b + 3] = 40.0;
        let (_, c) = lstm_step(&cell, &params, &[0.9], &[0.1, 0.2], &[1.5, -0.7]).unwrap();
        assert!((c[0] - 1.5).abs() < 1e-12);
        assert!((c[1] + 0.7).abs() < 1e-12);
    }

    #[test]
    fn step_is_pure() {
        let mut pb = ParamBuilder::new();
        let cell = pb.lstm(2, 4);
        let params = pb.build(&mut odkit_core::RngSeed(5).stream(0));
        let a = lstm_step(&cell, &params, &[0.1, 0.2], &[0.3; 4], &[-0.1; 4]).unwrap();
        let b = lstm_step(&cell, &params, &[0.1, 0.2], &[0.3; 4], &[-0.1; 4]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shape_mismatch() {
        let mut pb = ParamBuilder::new();
        let cell = pb.lstm(2, 4);
        let params = vec![0.0; pb.len()];
        assert!(lstm_step(&cell, &params, &[0.1], &[0.0; 4], &[0.0; 4]).is_err());
        assert!(lstm_step(&cell, &params, &[0.1, 0.2], &[0.0; 3], &[0.0; 4]).is_err());
    }
}
