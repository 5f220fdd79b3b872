/// Outcome of comparing analytic gradients with central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheck {
    pub max_rel_error: f64,
    pub worst_index: usize,
    pub analytic: f64,
    pub numeric: f64,
}

/// Gradients smaller than this are compared in absolute terms.
const SCALE_FLOOR: f64 = 1e-6;

/// `|a - n| / max(|a|, |n|, 1e-6)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(SCALE_FLOOR)
}

/// Central differences `(L(p + h e_i) - L(p - h e_i)) / 2h` for every
/// parameter, compared against `analytic`.
pub fn check_gradients(params: &[f64], analytic: &[f64], step: f64, mut loss: impl FnMut(&[f64]) -> f64) -> GradCheck {
    assert_eq!(params.len(), analytic.len());
    let mut p = params.to_vec();
    let mut worst = GradCheck { max_rel_error: 0.0, worst_index: 0, analytic: 0.0, numeric: 0.0 };
    for i in 0..p.len() {
        let orig = p[i];
        p[i] = orig + step;
        let up = loss(&p);
        p[i] = orig - step;
        let down = loss(&p);
        p[i] = orig;
        let numeric = (up - down) / (2.0 * step);
        let err = relative_error(analytic[i], numeric);
        if err > worst.max_rel_error || err.is_nan() {
            worst = GradCheck { max_rel_error: err, worst_index: i, analytic: analytic[i], numeric };
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{mse, Activation, Mlp, ParamBuilder};
    use odkit_core::RngSeed;
    use rand::Rng;

    #[test]
    fn quadratic() {
        let p = [1.0, -2.0];
        let g = [2.0, -4.0];
        let r = check_gradients(&p, &g, 1e-5, |q| q[0] * q[0] + q[1] * q[1]);
        assert!(r.max_rel_error < 1e-8);
    }

    #[test]
    fn mlp_gradients_match_finite_differences() {
        for seed in 0..3u64 {
            let mut pb = ParamBuilder::new();
            let mlp = Mlp {
                layers: vec![
                    pb.dense(3, 4, Activation::Tanh),
                    pb.dense(4, 2, Activation::Sigmoid),
                    pb.dense(2, 3, Activation::Identity),
                ],
            };
            let mut rng = RngSeed(seed).stream(0);
            let params = pb.build(&mut rng);
            let batch: Vec<Vec<f64>> = (0..5).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let loss = |p: &[f64]| -> f64 {
                batch.iter().map(|x| mse(&mlp.predict(p, x).unwrap(), x).0).sum::<f64>() / batch.len() as f64
            };
            let mut grads = vec![0.0; params.len()];
            for x in &batch {
                let cache = mlp.forward(&params, x).unwrap();
                let (_, dy) = mse(cache.output(), x);
                let dy: Vec<f64> = dy.iter().map(|g| g / batch.len() as f64).collect();
                mlp.backward(&params, &cache, &dy, &mut grads).unwrap();
            }
            let r = check_gradients(&params, &grads, 1e-5, loss);
            assert!(r.max_rel_error < 1e-4, "{r:?}");
        }
    }

    #[test]
    fn lstm_gradients_match_finite_differences() {
        let mut pb = ParamBuilder::new();
        let cell = pb.lstm(2, 3);
        let head = pb.dense(3, 1, Activation::Identity);
        let mut rng = RngSeed(4).stream(0);
        let params = pb.build(&mut rng);
        let seq: Vec<Vec<f64>> =
            (0..6).map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
        let target = 0.3;
        let loss = |p: &[f64]| {
            let (mut h, mut c) = cell.zero_state();
            for x in &seq {
                let s = cell.step(p, x, &h, &c).unwrap();
                h = s.h;
                c = s.c;
            }
            let y = head.forward(p, &h).unwrap().output[0];
            (y - target).powi(2)
        };
        let (mut h, mut c) = cell.zero_state();
        let mut caches = Vec::new();
        for x in &seq {
            let s = cell.step(&params, x, &h, &c).unwrap();
            h = s.h.clone();
            c = s.c.clone();
            caches.push(s);
        }
        let out = head.forward(&params, &h).unwrap();
        let mut grads = vec![0.0; params.len()];
        let mut dh = head.backward(&params, &out, &[2.0 * (out.output[0] - target)], &mut grads).unwrap();
        let mut dc = vec![0.0; 3];
        for cache in caches.iter().rev() {
            let g = cell.backward(&params, cache, &dh, &dc, &mut grads);
            dh = g.dh_prev;
            dc = g.dc_prev;
        }
        let r = check_gradients(&params, &grads, 1e-5, loss);
        assert!(r.max_rel_error < 1e-4, "{r:?}");
    }

    #[test]
    fn linear_autoencoder_loss_halves_in_200_steps() {
        let mut pb = ParamBuilder::new();
        let mlp = Mlp { layers: vec![pb.dense(4, 2, Activation::Identity), pb.dense(2, 4, Activation::Identity)] };
        let mut rng = RngSeed(2).stream(0);
        let mut params = pb.build(&mut rng);
        // rank-2 data so a width-2 bottleneck can represent it
        let data: Vec<Vec<f64>> = (0..32)
            .map(|_| {
                let (a, b): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                vec![a, b, a + b, a - b]
            })
            .collect();
        let loss = |p: &[f64]| data.iter().map(|x| mse(&mlp.predict(p, x).unwrap(), x).0).sum::<f64>() / 32.0;
        let initial = loss(&params);
        let mut adam = crate::Adam::new(params.len()).with_learning_rate(1e-2);
        for _ in 0..200 {
            let mut grads = vec![0.0; params.len()];
            for x in &data {
                let cache = mlp.forward(&params, x).unwrap();
                let (_, dy) = mse(cache.output(), x);
                let dy: Vec<f64> = dy.iter().map(|g| g / 32.0).collect();
                mlp.backward(&params, &cache, &dy, &mut grads).unwrap();
            }
            adam.step(&mut params, &grads);
        }
        assert!(loss(&params) <= 0.5 * initial, "{} -> {}", initial, loss(&params));
    }
}
