//! Randomized checks of the public layer, optimizer and linear-algebra API.

use odkit_core::RngSeed;
use odkit_nn::linalg::{cholesky, cholesky_inverse, cholesky_log_det, cholesky_solve, Gaussian};
use odkit_nn::{check_gradients, mse, Activation, Adam, Mlp, ParamBuilder, Tensor2};
use proptest::prelude::*;

const SMOOTH: [Activation; 3] = [Activation::Identity, Activation::Tanh, Activation::Sigmoid];

/// `B Bᵀ + n I` is symmetric positive definite for any `B`.
fn spd(n: usize, entries: &[f64]) -> Tensor2 {
    let mut a = Tensor2::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v: f64 = (0..n).map(|k| entries[i * n + k] * entries[j * n + k]).sum();
            a.set(i, j, v + if i == j { n as f64 } else { 0.0 });
        }
    }
    a
}

fn matvec(a: &Tensor2, x: &[f64]) -> Vec<f64> {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j) * x[j]).sum()).collect()
}

fn det(a: &Tensor2) -> f64 {
    // Laplace expansion; matrices here are at most 4x4
    let n = a.rows();
    if n == 1 {
        return a.get(0, 0);
    }
    (0..n)
        .map(|c| {
            let mut minor = Tensor2::zeros(n - 1, n - 1);
            for i in 1..n {
                for (jj, j) in (0..n).filter(|&j| j != c).enumerate() {
                    minor.set(i - 1, jj, a.get(i, j));
                }
            }
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * a.get(0, c) * det(&minor)
        })
        .sum()
}

fn matrix_case() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>)> {
    (1usize..=4).prop_flat_map(|n| {
        (Just(n), prop::collection::vec(-2.0f64..2.0, n * n), prop::collection::vec(-5.0f64..5.0, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cholesky_solve_inverse_and_log_det((n, entries, b) in matrix_case()) {
        let a = spd(n, &entries);
        let l = cholesky(&a).unwrap();
        let x = cholesky_solve(&l, &b);
        for (got, want) in matvec(&a, &x).iter().zip(&b) {
            prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want.abs()));
        }
        let inv = cholesky_inverse(&l);
        for i in 0..n {
            let col: Vec<f64> = (0..n).map(|r| inv.get(r, i)).collect();
            let e = matvec(&a, &col);
            for (r, v) in e.iter().enumerate() {
                let want = if r == i { 1.0 } else { 0.0 };
                prop_assert!((v - want).abs() <= 1e-9);
            }
        }
        prop_assert!((cholesky_log_det(&l) - det(&a).ln()).abs() <= 1e-9);
    }

    #[test]
    fn gaussian_mahalanobis_is_zero_at_mean_and_grows(
        rows in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 5..30),
        t in 1.0f64..4.0,
    ) {
        let g = Gaussian::fit(rows.iter().map(Vec::as_slice), 2, 1e-6).unwrap();
        let mean = g.mean().to_vec();
        prop_assert!(g.mahalanobis(&mean) <= 1e-12);
        let near = [mean[0] + 0.5, mean[1] - 0.25];
        let far = [mean[0] + 0.5 * t, mean[1] - 0.25 * t];
        // scaling the offset by t scales the quadratic form by t²
        prop_assert!((g.mahalanobis(&far) - t * t * g.mahalanobis(&near)).abs() <= 1e-8 * g.mahalanobis(&far).max(1.0));
    }

    #[test]
    fn mlp_parameter_and_input_gradients(
        seed in 0u64..1000,
        widths in prop::collection::vec(1usize..5, 2..5),
        act in 0usize..3,
    ) {
        let mut pb = ParamBuilder::new();
        let layers = widths.windows(2).map(|w| pb.dense(w[0], w[1], SMOOTH[act])).collect();
        let mlp = Mlp { layers };
        let mut rng = RngSeed(seed).stream(0);
        let params = pb.build(&mut rng);
        let x: Vec<f64> = (0..mlp.input()).map(|i| (i as f64 * 0.7 + seed as f64 * 0.01).sin()).collect();
        let target: Vec<f64> = (0..mlp.output()).map(|i| 0.1 * i as f64).collect();

        let cache = mlp.forward(&params, &x).unwrap();
        let (_, g_out) = mse(cache.output(), &target);
        let mut grads = vec![0.0; params.len()];
        let dx = mlp.backward(&params, &cache, &g_out, &mut grads).unwrap();
        let loss = |p: &[f64]| mse(&mlp.predict(p, &x).unwrap(), &target).0;
        let check = check_gradients(&params, &grads, 1e-5, loss);
        prop_assert!(check.max_rel_error <= 1e-4, "{:?}", check);

        let input_loss = |xi: &[f64]| mse(&mlp.predict(&params, xi).unwrap(), &target).0;
        let input_check = check_gradients(&x, &dx, 1e-5, input_loss);
        prop_assert!(input_check.max_rel_error <= 1e-4, "{:?}", input_check);
    }
}

#[test]
fn adam_fits_a_linear_map() {
    let mut pb = ParamBuilder::new();
    let layer = pb.dense(2, 1, Activation::Identity);
    let mlp = Mlp { layers: vec![layer] };
    let mut params = pb.build(&mut RngSeed(3).stream(0));
    let data: Vec<([f64; 2], f64)> = (0..20)
        .map(|i| {
            let (a, b) = ((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos());
            ([a, b], 2.0 * a - 3.0 * b + 0.5)
        })
        .collect();
    let mut adam = Adam::new(params.len()).with_learning_rate(0.05);
    let total = |p: &[f64]| data.iter().map(|(x, y)| mse(&mlp.predict(p, x).unwrap(), &[*y]).0).sum::<f64>();
    let start = total(&params);
    for _ in 0..2000 {
        let mut grads = vec![0.0; params.len()];
        for (x, y) in &data {
            let cache = mlp.forward(&params, x).unwrap();
            let (_, g) = mse(cache.output(), &[*y]);
            mlp.backward(&params, &cache, &g, &mut grads).unwrap();
        }
        adam.step(&mut params, &grads);
    }
    let end = total(&params);
    assert!(end < 1e-6 * start, "{start} -> {end}");
    assert_eq!(adam.steps_taken(), 2000);
}
