//! Analytic gradients of every deep training loss against central differences.

use odkit_core::RngSeed;
use odkit_detectors::deep::{autoencoder, dagmm, lstm_ad, lstm_ed};
use odkit_detectors::{Algorithm, AutoencoderParams, DagmmParams, LstmAdParams, LstmEdParams, Params};
use odkit_nn::{check_gradients, ParamBuilder};
use rand::Rng;

const STEP: f64 = 1e-5;
const TOL: f64 = 1e-4;
const SEEDS: [u64; 3] = [1, 2, 3];

fn random_rows(seed: u64, n: usize, d: usize) -> Vec<Vec<f64>> {
    let mut rng = RngSeed(seed).stream(99);
    (0..n).map(|_| (0..d).map(|_| rng.random_range(0.0..1.0)).collect()).collect()
}

fn assert_close(name: &str, seed: u64, check: odkit_nn::GradCheck) {
    assert!(
        check.max_rel_error <= TOL,
        "{name} seed {seed}: rel error {:e} at {} (analytic {:e}, numeric {:e})",
        check.max_rel_error,
        check.worst_index,
        check.analytic,
        check.numeric
    );
}

#[test]
fn autoencoder_loss() {
    for seed in SEEDS {
        let rows = random_rows(seed, 6, 4);
        let batch: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let mut b = ParamBuilder::new();
        let net = autoencoder::architecture(4, &autoencoder::default_hidden(4), &mut b);
        let params = b.build(&mut RngSeed(seed).stream(0));
        let mut grads = vec![0.0; params.len()];
        autoencoder::batch_loss(&net, &params, &batch, &mut grads).unwrap();
        let mut scratch = vec![0.0; params.len()];
        let check =
            check_gradients(&params, &grads, STEP, |p| autoencoder::batch_loss(&net, p, &batch, &mut scratch).unwrap());
        assert_close("autoencoder", seed, check);
    }
}

#[test]
fn dagmm_loss_including_energy() {
    let Params::Dagmm(defaults) = Params::defaults(Algorithm::Dagmm) else { unreachable!() };
    let small = DagmmParams { gmm_components: 3, latent_dim: 2, hidden: 5, cov_epsilon: 1e-3, ..defaults };
    for (seed, p) in SEEDS.into_iter().map(|s| (s, small)).chain(SEEDS.into_iter().map(|s| (s, defaults))) {
        let rows = random_rows(seed, 10, 3);
        let batch: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let (net, b) = dagmm::DagmmNet::new(3, &p);
        let params = b.build(&mut RngSeed(seed).stream(0));
        let mut grads = vec![0.0; params.len()];
        dagmm::batch_loss(&net, &params, &p, &batch, &mut grads).unwrap();
        let mut scratch = vec![0.0; params.len()];
        let check =
            check_gradients(&params, &grads, STEP, |q| dagmm::batch_loss(&net, q, &p, &batch, &mut scratch).unwrap());
        assert_close("dagmm", seed, check);
    }
}

#[test]
fn lstm_ad_loss() {
    for seed in SEEDS {
        let p = LstmAdParams {
            hidden: 4,
            predict_ahead: 2,
            window: 5,
            epochs: 1,
            batch: 4,
            learning_rate: 1e-2,
            cov_epsilon: 1e-6,
        };
        let series: Vec<f64> = random_rows(seed, 12, 2).concat();
        let (net, b) = lstm_ad::LstmAdNet::new(2, &p);
        let params = b.build(&mut RngSeed(seed).stream(0));
        let origins = [5, 7, 10];
        let mut grads = vec![0.0; params.len()];
        lstm_ad::batch_loss(&net, &params, &series, &origins, &mut grads).unwrap();
        let mut scratch = vec![0.0; params.len()];
        let check = check_gradients(&params, &grads, STEP, |q| {
            lstm_ad::batch_loss(&net, q, &series, &origins, &mut scratch).unwrap()
        });
        assert_close("lstm_ad", seed, check);
    }
}

#[test]
fn lstm_ed_loss() {
    for seed in SEEDS {
        let p = LstmEdParams {
            hidden: 4,
            window: 5,
            stride: 1,
            epochs: 1,
            batch: 4,
            learning_rate: 1e-2,
            cov_epsilon: 1e-6,
        };
        let series: Vec<f64> = random_rows(seed, 12, 2).concat();
        let (net, b) = lstm_ed::LstmEdNet::new(2, &p);
        let params = b.build(&mut RngSeed(seed).stream(0));
        let starts = [0, 3, 7];
        let mut grads = vec![0.0; params.len()];
        lstm_ed::batch_loss(&net, &params, &series, &starts, &mut grads).unwrap();
        let mut scratch = vec![0.0; params.len()];
        let check = check_gradients(&params, &grads, STEP, |q| {
            lstm_ed::batch_loss(&net, q, &series, &starts, &mut scratch).unwrap()
        });
        assert_close("lstm_ed", seed, check);
    }
}

#[test]
fn autoencoder_params_default_hidden() {
    let Params::Autoencoder(p) = Params::defaults(Algorithm::Autoencoder) else { unreachable!() };
    assert_eq!(p, AutoencoderParams { hidden_sizes: None, epochs: 100, batch: 32, learning_rate: p.learning_rate });
    assert_eq!(autoencoder::default_hidden(5), vec![5, 2, 5]);
    assert_eq!(autoencoder::default_hidden(1), vec![1, 1, 1]);
}
