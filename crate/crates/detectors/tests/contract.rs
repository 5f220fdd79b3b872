//! The fit / decision_function / predict contract, checked for all thirteen
//! algorithms on one small two-column series.

use odkit_core::datagen::{generate_static, StaticGenSpec};
use odkit_core::{RngSeed, TimeSeriesFrame};
use odkit_detectors::{
    algorithm_selection, fit, quantile_linear, Algorithm, DetectError, DetectorSpec, FittedDetector,
};

/// Small training budgets so the whole matrix runs in seconds.
fn fast_overrides(algo: Algorithm) -> Vec<(&'static str, &'static str)> {
    match algo {
        Algorithm::Autoencoder => vec![("epochs", "5")],
        Algorithm::Dagmm => vec![("epochs", "5"), ("batch", "32")],
        Algorithm::Lstmad | Algorithm::Lstmed => vec![("epochs", "2"), ("window", "6"), ("hidden", "4")],
        _ => vec![],
    }
}

fn spec(algo: Algorithm, contamination: f64) -> DetectorSpec {
    algorithm_selection(algo.name(), fast_overrides(algo), contamination, RngSeed(42)).unwrap()
}

fn series(n: usize, phase: f64) -> TimeSeriesFrame {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let t = i as f64 * 0.2 + phase;
            let bump = if i % 37 == 11 { 3.0 } else { 0.0 };
            vec![t.sin() + bump, (1.7 * t).cos() * 0.5 + 0.01 * i as f64]
        })
        .collect();
    TimeSeriesFrame::from_rows((0..n as i64).map(|i| i * 60).collect(), vec!["a".into(), "b".into()], &rows).unwrap()
}

fn fitted(algo: Algorithm) -> (FittedDetector, TimeSeriesFrame) {
    let train = series(120, 0.0);
    (fit(&spec(algo, 0.1), &train).unwrap(), train)
}

#[test]
fn threshold_is_training_quantile() {
    for algo in Algorithm::ALL {
        let (det, train) = fitted(algo);
        let scores = det.decision_function(&train).unwrap();
        assert_eq!(det.threshold(), quantile_linear(&scores, 0.9), "{algo}");
        assert!(det.threshold().is_finite());
    }
}

#[test]
fn predict_is_score_above_threshold() {
    let test = series(90, 1.3);
    for algo in Algorithm::ALL {
        let (det, _) = fitted(algo);
        let scores = det.decision_function(&test).unwrap();
        let labels = det.predict(&test).unwrap();
        assert_eq!(scores.len(), test.n_rows());
        for (s, l) in scores.iter().zip(labels.iter()) {
            assert_eq!(*l == 1, *s > det.threshold(), "{algo}");
        }
    }
}

#[test]
fn deterministic_and_pure() {
    let test = series(90, 0.7);
    for algo in Algorithm::ALL {
        let (a, _) = fitted(algo);
        let (b, _) = fitted(algo);
        assert_eq!(a.threshold(), b.threshold(), "{algo}");
        let sa = a.decision_function(&test).unwrap();
        assert_eq!(sa, b.decision_function(&test).unwrap(), "{algo}");
        assert_eq!(sa, a.decision_function(&test).unwrap(), "{algo}");
    }
}

#[test]
fn save_load_round_trip() {
    let test = series(90, 2.1);
    for algo in Algorithm::ALL {
        let (det, _) = fitted(algo);
        let mut buf = Vec::new();
        det.save(&mut buf).unwrap();
        assert_eq!(&buf[..8], b"ODKMODEL");
        let back = FittedDetector::load(buf.as_slice()).unwrap();
        assert_eq!(back.threshold(), det.threshold(), "{algo}");
        assert_eq!(back.decision_function(&test).unwrap(), det.decision_function(&test).unwrap(), "{algo}");
    }
    assert!(matches!(FittedDetector::load(&b"garbage!garbage"[..]), Err(DetectError::Model(_))));
}

#[test]
fn column_mismatch_and_empty_input() {
    for algo in Algorithm::ALL {
        let (det, train) = fitted(algo);
        let renamed =
            TimeSeriesFrame::new(train.timestamps().to_vec(), vec!["a".into(), "c".into()], train.values().to_vec())
                .unwrap();
        assert!(matches!(det.decision_function(&renamed), Err(DetectError::ColumnMismatch { .. })), "{algo}");
        assert!(matches!(det.predict(&renamed), Err(DetectError::ColumnMismatch { .. })), "{algo}");
        let empty = TimeSeriesFrame::empty(vec!["a".into(), "b".into()]).unwrap();
        assert!(fit(&spec(algo, 0.1), &empty).is_err(), "{algo}");
    }
}

#[test]
fn raising_contamination_never_labels_fewer() {
    let train = series(120, 0.0);
    for algo in Algorithm::ALL {
        let mut last = 0;
        for c in [0.02, 0.05, 0.1, 0.2, 0.35, 0.5] {
            let det = fit(&spec(algo, c), &train).unwrap();
            let n = det.predict(&train).unwrap().count_outliers();
            assert!(n >= last, "{algo} at {c}: {n} < {last}");
            last = n;
        }
    }
}

#[test]
fn series_scores_align_and_are_nonnegative() {
    let test = series(70, 0.4);
    for algo in [Algorithm::Lstmad, Algorithm::Lstmed, Algorithm::Luminol] {
        let (det, _) = fitted(algo);
        let s = det.decision_function(&test).unwrap();
        assert_eq!(s.len(), 70);
        assert!(s.iter().all(|&v| v >= 0.0), "{algo}");
    }
    let (det, _) = fitted(Algorithm::Lstmad);
    let s = det.decision_function(&test).unwrap();
    assert!(s[..6].iter().all(|&v| v == 0.0));
    assert!(s[6..].iter().any(|&v| v > 0.0));
}

#[test]
fn ten_percent_labeled_on_thousand_rows() {
    let (frame, _) = generate_static(&StaticGenSpec::default()).unwrap();
    assert_eq!(frame.n_rows(), 1000);
    let det =
        fit(&algorithm_selection("iforest", Vec::<(&str, &str)>::new(), 0.1, RngSeed(0)).unwrap(), &frame).unwrap();
    let scores = det.decision_function(&frame).unwrap();
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    assert!(sorted[899] < sorted[900], "tie at the threshold");
    assert_eq!(det.predict(&frame).unwrap().count_outliers(), 100);
}

#[test]
fn too_small_training_sets() {
    let tiny = series(3, 0.0);
    let pca = algorithm_selection("pca", Vec::<(&str, &str)>::new(), 0.1, RngSeed(0)).unwrap();
    assert!(matches!(fit(&pca, &series(2, 0.0)), Err(DetectError::TooFewRows { .. })));
    for (algo, overrides) in [
        (Algorithm::Knn, vec![("k", "3")]),
        (Algorithm::Lof, vec![("k", "5")]),
        (Algorithm::Sod, vec![]),
        (Algorithm::Lstmad, vec![]),
        (Algorithm::Lstmed, vec![]),
        (Algorithm::Luminol, vec![("lag_window", "4")]),
    ] {
        let spec = algorithm_selection(algo.name(), overrides, 0.1, RngSeed(0)).unwrap();
        assert!(matches!(fit(&spec, &tiny), Err(DetectError::TooFewRows { .. })), "{algo}");
    }
}
