use std::fmt;
use std::str::FromStr;

use odkit_core::RngSeed;
use serde::{Deserialize, Serialize};

use crate::error::{DetectError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Cblof,
    Sod,
    Hbos,
    Iforest,
    Knn,
    Lof,
    Ocsvm,
    Pca,
    Autoencoder,
    Dagmm,
    Lstmed,
    Lstmad,
    Luminol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    FixedLengthShallow,
    FixedLengthDeep,
    TimeSeriesDeep,
    TimeSeriesShallow,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::FixedLengthShallow,
        Category::FixedLengthDeep,
        Category::TimeSeriesDeep,
        Category::TimeSeriesShallow,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Category::FixedLengthShallow => "Fixed-length, shallow",
            Category::FixedLengthDeep => "Fixed-length, deep",
            Category::TimeSeriesDeep => "Time series, deep",
            Category::TimeSeriesShallow => "Time series, shallow",
        }
    }

    /// Case-insensitive match on the label.
    pub fn from_label(label: &str) -> Option<Category> {
        Self::ALL.into_iter().find(|c| c.label().eq_ignore_ascii_case(label.trim()))
    }

    pub fn is_time_series(self) -> bool {
        matches!(self, Category::TimeSeriesDeep | Category::TimeSeriesShallow)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Algorithm {
    pub const ALL: [Algorithm; 13] = [
        Algorithm::Cblof,
        Algorithm::Sod,
        Algorithm::Hbos,
        Algorithm::Iforest,
        Algorithm::Knn,
        Algorithm::Lof,
        Algorithm::Ocsvm,
        Algorithm::Pca,
        Algorithm::Autoencoder,
        Algorithm::Dagmm,
        Algorithm::Lstmed,
        Algorithm::Lstmad,
        Algorithm::Luminol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cblof => "CBLOF",
            Algorithm::Sod => "SOD",
            Algorithm::Hbos => "HBOS",
            Algorithm::Iforest => "IFOREST",
            Algorithm::Knn => "KNN",
            Algorithm::Lof => "LOF",
            Algorithm::Ocsvm => "OCSVM",
            Algorithm::Pca => "PCA",
            Algorithm::Autoencoder => "AUTOENCODER",
            Algorithm::Dagmm => "DAGMM",
            Algorithm::Lstmed => "LSTMED",
            Algorithm::Lstmad => "LSTMAD",
            Algorithm::Luminol => "LUMINOL",
        }
    }

    pub fn category(self) -> Category {
        match self {
            Algorithm::Autoencoder | Algorithm::Dagmm => Category::FixedLengthDeep,
            Algorithm::Lstmed | Algorithm::Lstmad => Category::TimeSeriesDeep,
            Algorithm::Luminol => Category::TimeSeriesShallow,
            _ => Category::FixedLengthShallow,
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|a| a.name()).collect()
    }

    /// Name lookup, ignoring ASCII case.
    pub fn parse(name: &str) -> Result<Algorithm> {
        Self::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(name.trim()))
            .ok_or_else(|| DetectError::UnknownAlgorithm { name: name.to_string(), valid: Self::names() })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HbosParams {
    pub n_bins: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LofParams {
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IforestParams {
    pub n_trees: usize,
    /// Capped at the training size.
    pub subsample: usize,
    /// `None` means `ceil(log2(subsample))`.
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CblofParams {
    pub n_clusters: usize,
    pub alpha: f64,
    pub beta: f64,
    pub kmeans_iters: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcaParams {
    pub variance_epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gamma {
    /// `1 / (d * var)`, with `var` the mean per-feature variance of the training data.
    Scale,
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OcsvmParams {
    pub nu: f64,
    pub gamma: Gamma,
    pub smo_tolerance: f64,
    pub max_passes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SodParams {
    pub n_shared_neighbors: usize,
    pub ref_set_size: usize,
    pub variance_alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoencoderParams {
    /// `None` means `[d, max(1, d/2), d]`.
    pub hidden_sizes: Option<Vec<usize>>,
    pub epochs: usize,
    pub batch: usize,
    pub learning_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DagmmParams {
    pub latent_dim: usize,
    pub gmm_components: usize,
    pub lambda_energy: f64,
    pub lambda_covdiag: f64,
    pub cov_epsilon: f64,
    pub epochs: usize,
    pub batch: usize,
    /// Width of the hidden layers in the compression and estimation networks.
    pub hidden: usize,
    pub learning_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LstmAdParams {
    pub hidden: usize,
    pub predict_ahead: usize,
    pub window: usize,
    pub epochs: usize,
    pub batch: usize,
    pub learning_rate: f64,
    pub cov_epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LstmEdParams {
    pub hidden: usize,
    pub window: usize,
    pub stride: usize,
    pub epochs: usize,
    pub batch: usize,
    pub learning_rate: f64,
    pub cov_epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuminolParams {
    pub ema_smoothing: f64,
    /// `None` means `max(3, round(0.2 * n))` rows.
    pub lag_window: Option<usize>,
    /// `None` means the first data column.
    pub target_column: Option<String>,
}

/// Hyperparameters for one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Params {
    Cblof(CblofParams),
    Sod(SodParams),
    Hbos(HbosParams),
    Iforest(IforestParams),
    Knn(KnnParams),
    Lof(LofParams),
    Ocsvm(OcsvmParams),
    Pca(PcaParams),
    Autoencoder(AutoencoderParams),
    Dagmm(DagmmParams),
    Lstmed(LstmEdParams),
    Lstmad(LstmAdParams),
    Luminol(LuminolParams),
}

impl Params {
    pub fn defaults(algorithm: Algorithm) -> Params {
        match algorithm {
            Algorithm::Hbos => Params::Hbos(HbosParams { n_bins: 10 }),
            Algorithm::Knn => Params::Knn(KnnParams { k: 5 }),
            Algorithm::Lof => Params::Lof(LofParams { k: 20 }),
            Algorithm::Iforest => Params::Iforest(IforestParams { n_trees: 100, subsample: 256, max_depth: None }),
            Algorithm::Cblof => Params::Cblof(CblofParams { n_clusters: 8, alpha: 0.9, beta: 5.0, kmeans_iters: 100 }),
            Algorithm::Pca => Params::Pca(PcaParams { variance_epsilon: 1e-9 }),
            Algorithm::Ocsvm => {
                Params::Ocsvm(OcsvmParams { nu: 0.5, gamma: Gamma::Scale, smo_tolerance: 1e-4, max_passes: 200 })
            }
            Algorithm::Sod => Params::Sod(SodParams { n_shared_neighbors: 10, ref_set_size: 10, variance_alpha: 0.8 }),
            Algorithm::Autoencoder => Params::Autoencoder(AutoencoderParams {
                hidden_sizes: None,
                epochs: 100,
                batch: 32,
                learning_rate: 1e-2,
            }),
            Algorithm::Dagmm => Params::Dagmm(DagmmParams {
                latent_dim: 1,
                gmm_components: 4,
                lambda_energy: 0.1,
                lambda_covdiag: 0.005,
                cov_epsilon: 1e-6,
                epochs: 200,
                batch: 64,
                hidden: 10,
                learning_rate: 1e-3,
            }),
            Algorithm::Lstmad => Params::Lstmad(LstmAdParams {
                hidden: 32,
                predict_ahead: 1,
                window: 30,
                epochs: 50,
                batch: 32,
                learning_rate: 1e-2,
                cov_epsilon: 1e-6,
            }),
            Algorithm::Lstmed => Params::Lstmed(LstmEdParams {
                hidden: 32,
                window: 30,
                stride: 1,
                epochs: 50,
                batch: 32,
                learning_rate: 1e-2,
                cov_epsilon: 1e-6,
            }),
            Algorithm::Luminol => {
                Params::Luminol(LuminolParams { ema_smoothing: 0.2, lag_window: None, target_column: None })
            }
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            Params::Cblof(_) => Algorithm::Cblof,
            Params::Sod(_) => Algorithm::Sod,
            Params::Hbos(_) => Algorithm::Hbos,
            Params::Iforest(_) => Algorithm::Iforest,
            Params::Knn(_) => Algorithm::Knn,
            Params::Lof(_) => Algorithm::Lof,
            Params::Ocsvm(_) => Algorithm::Ocsvm,
            Params::Pca(_) => Algorithm::Pca,
            Params::Autoencoder(_) => Algorithm::Autoencoder,
            Params::Dagmm(_) => Algorithm::Dagmm,
            Params::Lstmed(_) => Algorithm::Lstmed,
            Params::Lstmad(_) => Algorithm::Lstmad,
            Params::Luminol(_) => Algorithm::Luminol,
        }
    }

    /// Overrides one hyperparameter from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let algo = self.algorithm().name();
        let p = Setter { algo, key, value };
        match self {
            Params::Hbos(h) => match key {
                "n_bins" => h.n_bins = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Knn(k) => match key {
                "k" => k.k = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Lof(l) => match key {
                "k" => l.k = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Iforest(f) => match key {
                "n_trees" => f.n_trees = p.parse()?,
                "subsample" => f.subsample = p.parse()?,
                "max_depth" => f.max_depth = Some(p.parse()?),
                _ => return Err(p.unknown()),
            },
            Params::Cblof(c) => match key {
                "n_clusters" => c.n_clusters = p.parse()?,
                "alpha" => c.alpha = p.parse()?,
                "beta" => c.beta = p.parse()?,
                "kmeans_iters" => c.kmeans_iters = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Pca(c) => match key {
                "variance_epsilon" => c.variance_epsilon = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Ocsvm(o) => match key {
                "nu" => o.nu = p.parse()?,
                "rbf_gamma" | "gamma" => {
                    o.gamma =
                        if value.trim().eq_ignore_ascii_case("scale") { Gamma::Scale } else { Gamma::Value(p.parse()?) }
                }
                "smo_tolerance" => o.smo_tolerance = p.parse()?,
                "max_passes" => o.max_passes = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Sod(s) => match key {
                "n_shared_neighbors" => s.n_shared_neighbors = p.parse()?,
                "ref_set_size" => s.ref_set_size = p.parse()?,
                "variance_alpha" => s.variance_alpha = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Autoencoder(a) => match key {
                "hidden_sizes" => {
                    let sizes = value
                        .split([',', ';', ' '])
                        .filter(|s| !s.is_empty())
                        .map(|s| Setter { value: s, ..p }.parse())
                        .collect::<Result<Vec<usize>>>()?;
                    a.hidden_sizes = Some(sizes);
                }
                "epochs" => a.epochs = p.parse()?,
                "batch" => a.batch = p.parse()?,
                "learning_rate" => a.learning_rate = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Dagmm(g) => match key {
                "latent_dim" => g.latent_dim = p.parse()?,
                "gmm_components" | "k" => g.gmm_components = p.parse()?,
                "lambda_energy" => g.lambda_energy = p.parse()?,
                "lambda_covdiag" => g.lambda_covdiag = p.parse()?,
                "cov_epsilon" => g.cov_epsilon = p.parse()?,
                "epochs" => g.epochs = p.parse()?,
                "batch" => g.batch = p.parse()?,
                "hidden" => g.hidden = p.parse()?,
                "learning_rate" => g.learning_rate = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Lstmad(l) => match key {
                "hidden" => l.hidden = p.parse()?,
                "predict_ahead" => l.predict_ahead = p.parse()?,
                "window" => l.window = p.parse()?,
                "epochs" => l.epochs = p.parse()?,
                "batch" => l.batch = p.parse()?,
                "learning_rate" => l.learning_rate = p.parse()?,
                "cov_epsilon" => l.cov_epsilon = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Lstmed(l) => match key {
                "hidden" => l.hidden = p.parse()?,
                "window" => l.window = p.parse()?,
                "stride" => l.stride = p.parse()?,
                "epochs" => l.epochs = p.parse()?,
                "batch" => l.batch = p.parse()?,
                "learning_rate" => l.learning_rate = p.parse()?,
                "cov_epsilon" => l.cov_epsilon = p.parse()?,
                _ => return Err(p.unknown()),
            },
            Params::Luminol(l) => match key {
                "ema_smoothing" => l.ema_smoothing = p.parse()?,
                "lag_window" => l.lag_window = Some(p.parse()?),
                "target_column" => l.target_column = Some(value.trim().to_string()),
                _ => return Err(p.unknown()),
            },
        }
        Ok(())
    }

    /// Checks the constraints that do not depend on the training data.
    pub fn validate(&self) -> Result<()> {
        let algo = self.algorithm().name();
        let bad = |param: &str, reason: &str| {
            Err(DetectError::InvalidParam { algorithm: algo, param: param.to_string(), reason: reason.to_string() })
        };
        let positive = |x: f64| x > 0.0 && x.is_finite();
        match self {
            Params::Hbos(h) if h.n_bins < 2 => bad("n_bins", "must be at least 2"),
            Params::Knn(k) if k.k == 0 => bad("k", "must be at least 1"),
            Params::Lof(l) if l.k == 0 => bad("k", "must be at least 1"),
            Params::Iforest(f) if f.n_trees == 0 => bad("n_trees", "must be at least 1"),
            Params::Iforest(f) if f.subsample < 2 => bad("subsample", "must be at least 2"),
            Params::Iforest(f) if f.max_depth == Some(0) => bad("max_depth", "must be at least 1"),
            Params::Cblof(c) if c.n_clusters == 0 => bad("n_clusters", "must be at least 1"),
            Params::Cblof(c) if !(c.alpha > 0.0 && c.alpha < 1.0) => bad("alpha", "must lie in (0, 1)"),
            Params::Cblof(c) if !(c.beta > 1.0 && c.beta.is_finite()) => bad("beta", "must be greater than 1"),
            Params::Cblof(c) if c.kmeans_iters == 0 => bad("kmeans_iters", "must be at least 1"),
            Params::Pca(c) if !positive(c.variance_epsilon) => bad("variance_epsilon", "must be positive"),
            Params::Ocsvm(o) if !(o.nu > 0.0 && o.nu <= 1.0) => bad("nu", "must lie in (0, 1]"),
            Params::Ocsvm(OcsvmParams { gamma: Gamma::Value(g), .. }) if !positive(*g) => {
                bad("rbf_gamma", "must be positive or `scale`")
            }
            Params::Ocsvm(o) if !positive(o.smo_tolerance) => bad("smo_tolerance", "must be positive"),
            Params::Ocsvm(o) if o.max_passes == 0 => bad("max_passes", "must be at least 1"),
            Params::Sod(s) if s.n_shared_neighbors == 0 => bad("n_shared_neighbors", "must be at least 1"),
            Params::Sod(s) if s.ref_set_size == 0 => bad("ref_set_size", "must be at least 1"),
            Params::Sod(s) if !(s.variance_alpha > 0.0 && s.variance_alpha < 1.0) => {
                bad("variance_alpha", "must lie in (0, 1)")
            }
            Params::Autoencoder(a) if a.hidden_sizes.as_ref().is_some_and(|h| h.is_empty() || h.contains(&0)) => {
                bad("hidden_sizes", "needs at least one layer, all widths >= 1")
            }
            Params::Autoencoder(a) if a.epochs == 0 => bad("epochs", "must be at least 1"),
            Params::Autoencoder(a) if a.batch == 0 => bad("batch", "must be at least 1"),
            Params::Autoencoder(a) if !positive(a.learning_rate) => bad("learning_rate", "must be positive"),
            Params::Dagmm(g) if g.gmm_components == 0 => bad("gmm_components", "must be at least 1"),
            Params::Dagmm(g) if g.latent_dim == 0 => bad("latent_dim", "must be at least 1"),
            Params::Dagmm(g) if g.epochs == 0 => bad("epochs", "must be at least 1"),
            Params::Dagmm(g) if g.batch < 2 => bad("batch", "must be at least 2"),
            Params::Dagmm(g) if g.hidden == 0 => bad("hidden", "must be at least 1"),
            Params::Dagmm(g) if !positive(g.cov_epsilon) => bad("cov_epsilon", "must be positive"),
            Params::Dagmm(g) if !(g.lambda_energy >= 0.0 && g.lambda_covdiag >= 0.0) => {
                bad("lambda_energy", "loss weights must be nonnegative")
            }
            Params::Dagmm(g) if !positive(g.learning_rate) => bad("learning_rate", "must be positive"),
            Params::Lstmad(l) if l.window < 2 => bad("window", "must be at least 2"),
            Params::Lstmad(l) if l.hidden == 0 => bad("hidden", "must be at least 1"),
            Params::Lstmad(l) if l.predict_ahead == 0 => bad("predict_ahead", "must be at least 1"),
            Params::Lstmad(l) if l.epochs == 0 => bad("epochs", "must be at least 1"),
            Params::Lstmad(l) if l.batch == 0 => bad("batch", "must be at least 1"),
            Params::Lstmad(l) if !positive(l.learning_rate) => bad("learning_rate", "must be positive"),
            Params::Lstmad(l) if !positive(l.cov_epsilon) => bad("cov_epsilon", "must be positive"),
            Params::Lstmed(l) if l.window < 2 => bad("window", "must be at least 2"),
            Params::Lstmed(l) if l.hidden == 0 => bad("hidden", "must be at least 1"),
            Params::Lstmed(l) if l.stride == 0 => bad("stride", "must be at least 1"),
            Params::Lstmed(l) if l.epochs == 0 => bad("epochs", "must be at least 1"),
            Params::Lstmed(l) if l.batch == 0 => bad("batch", "must be at least 1"),
            Params::Lstmed(l) if !positive(l.learning_rate) => bad("learning_rate", "must be positive"),
            Params::Lstmed(l) if !positive(l.cov_epsilon) => bad("cov_epsilon", "must be positive"),
            Params::Luminol(l) if !(l.ema_smoothing > 0.0 && l.ema_smoothing <= 1.0) => {
                bad("ema_smoothing", "must lie in (0, 1]")
            }
            Params::Luminol(l) if l.lag_window.is_some_and(|w| w < 3) => bad("lag_window", "must be at least 3"),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy)]
struct Setter<'a> {
    algo: &'static str,
    key: &'a str,
    value: &'a str,
}

impl Setter<'_> {
    fn parse<T: FromStr>(&self) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.value.trim().parse().map_err(|e: T::Err| DetectError::InvalidParam {
            algorithm: self.algo,
            param: self.key.to_string(),
            reason: format!("cannot parse {:?}: {e}", self.value),
        })
    }

    fn unknown(&self) -> DetectError {
        DetectError::InvalidParam {
            algorithm: self.algo,
            param: self.key.to_string(),
            reason: "unknown parameter".into(),
        }
    }
}

/// Algorithm choice plus everything needed to fit it reproducibly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub params: Params,
    pub contamination: f64,
    pub seed: RngSeed,
}

pub const DEFAULT_CONTAMINATION: f64 = 0.1;

impl DetectorSpec {
    pub fn new(params: Params, contamination: f64, seed: RngSeed) -> Result<Self> {
        if !(contamination > 0.0 && contamination <= 0.5) {
            return Err(DetectError::InvalidContamination(contamination));
        }
        params.validate()?;
        Ok(Self { params, contamination, seed })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.params.algorithm()
    }
}

/// Resolves an algorithm name (case-insensitive), applies `overrides` on top
/// of the defaults and validates the result.
pub fn algorithm_selection<K, V>(
    name: &str,
    overrides: impl IntoIterator<Item = (K, V)>,
    contamination: f64,
    seed: RngSeed,
) -> Result<DetectorSpec>
where
    K: AsRef<str>,
    V: AsRef<str>,
{
    let algorithm = Algorithm::parse(name)?;
    let mut params = Params::defaults(algorithm);
    for (k, v) in overrides {
        params.set(k.as_ref().trim(), v.as_ref())?;
    }
    DetectorSpec::new(params, contamination, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn select(name: &str, overrides: &[(&str, &str)]) -> Result<DetectorSpec> {
        algorithm_selection(name, overrides.iter().copied(), DEFAULT_CONTAMINATION, RngSeed(0))
    }

    #[test]
    fn case_insensitive_names() {
        assert_eq!(select("iforest", &[]).unwrap().algorithm(), Algorithm::Iforest);
        assert_eq!(select("dagmm", &[]).unwrap().algorithm(), Algorithm::Dagmm);
        assert_eq!(select("LstmAD", &[]).unwrap().algorithm(), Algorithm::Lstmad);
    }

    #[test]
    fn unknown_name_lists_all_thirteen() {
        let err = select("notanalgo", &[]).unwrap_err();
        let msg = err.to_string();
        for a in Algorithm::ALL {
            assert!(msg.contains(a.name()), "{msg}");
        }
        match err {
            DetectError::UnknownAlgorithm { valid, .. } => assert_eq!(valid.len(), 13),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overrides_and_defaults() {
        let spec = select("knn", &[("k", "7")]).unwrap();
        assert_eq!(spec.params, Params::Knn(KnnParams { k: 7 }));
        let spec = select("ocsvm", &[("rbf_gamma", "0.5"), ("nu", "0.2")]).unwrap();
        match spec.params {
            Params::Ocsvm(o) => {
                assert_eq!(o.gamma, Gamma::Value(0.5));
                assert_eq!(o.nu, 0.2);
                assert_eq!(o.max_passes, 200);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn invalid_params_name_the_parameter() {
        for (name, key, value) in [
            ("hbos", "n_bins", "1"),
            ("ocsvm", "nu", "1.5"),
            ("cblof", "beta", "1"),
            ("sod", "variance_alpha", "1"),
            ("knn", "k", "abc"),
            ("knn", "bogus", "1"),
            ("luminol", "lag_window", "2"),
        ] {
            match select(name, &[(key, value)]) {
                Err(DetectError::InvalidParam { param, .. }) => assert_eq!(param, key),
                other => panic!("{name} {key}={value}: {other:?}"),
            }
        }
    }

    #[test]
    fn contamination_range() {
        assert!(algorithm_selection("hbos", Vec::<(&str, &str)>::new(), 0.0, RngSeed(0)).is_err());
        assert!(algorithm_selection("hbos", Vec::<(&str, &str)>::new(), 0.51, RngSeed(0)).is_err());
        assert!(algorithm_selection("hbos", Vec::<(&str, &str)>::new(), 0.5, RngSeed(0)).is_ok());
    }

    #[test]
    fn categories_cover_the_table() {
        let ts_deep: Vec<_> =
            Algorithm::ALL.iter().filter(|a| a.category() == Category::TimeSeriesDeep).map(|a| a.name()).collect();
        assert_eq!(ts_deep, vec!["LSTMED", "LSTMAD"]);
        assert_eq!(Algorithm::ALL.iter().filter(|a| a.category() == Category::FixedLengthShallow).count(), 8);
        assert_eq!(Category::from_label("time series, DEEP"), Some(Category::TimeSeriesDeep));
    }
}
