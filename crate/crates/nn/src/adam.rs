use serde::{Deserialize, Serialize};

/// Bias-corrected Adam over a flat parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adam {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub fn new(n_params: usize) -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
        }
    }

    pub fn with_learning_rate(mut self, lr: f64) -> Self {
        self.learning_rate = lr;
        self
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        assert_eq!(params.len(), self.m.len(), "parameter count changed");
        assert_eq!(grads.len(), self.m.len(), "gradient shape differs from parameters");
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step as i32);
        let bc2 = 1.0 - self.beta2.powi(self.step as i32);
        for i in 0..params.len() {
            let g = grads[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_is_a_no_op() {
        let mut p = vec![1.0, -2.0, 3.5];
        let mut adam = Adam::new(3);
        for _ in 0..10 {
            adam.step(&mut p, &[0.0; 3]);
        }
        assert_eq!(p, vec![1.0, -2.0, 3.5]);
    }

    #[test]
    fn constant_gradient_gives_lr_sized_steps() {
        let mut p = vec![0.0, 0.0];
        let mut adam = Adam::new(2);
        let mut last = p.clone();
        for _ in 0..1000 {
            last.copy_from_slice(&p);
            adam.step(&mut p, &[0.3, -20.0]);
        }
        let lr = adam.learning_rate;
        let d0 = last[0] - p[0];
        let d1 = p[1] - last[1];
        assert!((d0 / lr - 1.0).abs() < 0.05, "step {d0}");
        assert!((d1 / lr - 1.0).abs() < 0.05, "step {d1}");
    }

    #[test]
    fn identical_inputs_identical_updates() {
        let mut a = vec![0.5, 0.25];
        let mut b = a.clone();
        let (mut oa, mut ob) = (Adam::new(2), Adam::new(2));
        for k in 0..50 {
            let g = [k as f64 * 0.1, -1.0];
            oa.step(&mut a, &g);
            ob.step(&mut b, &g);
        }
        assert_eq!(a, b);
    }
}
