use std::io::{Read, Write};

use odkit_core::{LabelVector, ScoreVector, TimeSeriesFrame};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deep::{AutoencoderModel, DagmmModel, LstmAdModel, LstmEdModel};
use crate::error::{DetectError, Result};
use crate::luminol::LuminolModel;
use crate::quantile::quantile_linear;
use crate::shallow::{CblofModel, HbosModel, IforestModel, KnnModel, LofModel, OcsvmModel, PcaModel, Points, SodModel};
use crate::spec::{DetectorSpec, Params};

const MAGIC: &[u8; 8] = b"ODKMODEL";
const FORMAT_VERSION: u32 = 1;

/// Trained state of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Model {
    Cblof(CblofModel),
    Sod(SodModel),
    Hbos(HbosModel),
    Iforest(IforestModel),
    Knn(KnnModel),
    Lof(LofModel),
    Ocsvm(OcsvmModel),
    Pca(PcaModel),
    Autoencoder(AutoencoderModel),
    Dagmm(DagmmModel),
    Lstmed(LstmEdModel),
    Lstmad(LstmAdModel),
    Luminol(LuminolModel),
}

impl Model {
    fn fit(spec: &DetectorSpec, train: &TimeSeriesFrame) -> Result<Self> {
        let points = Points::new(train.values().to_vec(), train.n_cols());
        let seed = spec.seed;
        Ok(match &spec.params {
            Params::Cblof(p) => Model::Cblof(CblofModel::fit(p, &points, seed)?),
            Params::Sod(p) => Model::Sod(SodModel::fit(p, &points)?),
            Params::Hbos(p) => Model::Hbos(HbosModel::fit(p, &points)?),
            Params::Iforest(p) => Model::Iforest(IforestModel::fit(p, &points, seed)?),
            Params::Knn(p) => Model::Knn(KnnModel::fit(p, &points)?),
            Params::Lof(p) => Model::Lof(LofModel::fit(p, &points)?),
            Params::Ocsvm(p) => Model::Ocsvm(OcsvmModel::fit(p, &points)?),
            Params::Pca(p) => Model::Pca(PcaModel::fit(p, &points)?),
            Params::Autoencoder(p) => Model::Autoencoder(AutoencoderModel::fit(p, &points, seed)?),
            Params::Dagmm(p) => Model::Dagmm(DagmmModel::fit(p, &points, seed)?),
            Params::Lstmed(p) => Model::Lstmed(LstmEdModel::fit(p, &points, seed)?),
            Params::Lstmad(p) => Model::Lstmad(LstmAdModel::fit(p, &points, seed)?),
            Params::Luminol(p) => Model::Luminol(LuminolModel::fit(p, train.columns())?),
        })
    }

    fn score(&self, frame: &TimeSeriesFrame) -> Result<Vec<f64>> {
        let d = frame.n_cols();
        let rows = |f: &(dyn Fn(&[f64]) -> f64 + Sync)| -> Vec<f64> { frame.values().par_chunks(d).map(f).collect() };
        Ok(match self {
            Model::Cblof(m) => rows(&|x| m.score_row(x)),
            Model::Sod(m) => rows(&|x| m.score_row(x)),
            Model::Hbos(m) => rows(&|x| m.score_row(x)),
            Model::Iforest(m) => rows(&|x| m.score_row(x)),
            Model::Knn(m) => rows(&|x| m.score_row(x)),
            Model::Lof(m) => rows(&|x| m.score_row(x)),
            Model::Ocsvm(m) => rows(&|x| m.score_row(x)),
            Model::Pca(m) => rows(&|x| m.score_row(x)),
            Model::Autoencoder(m) => rows(&|x| m.score_row(x)),
            Model::Dagmm(m) => rows(&|x| m.score_row(x)),
            Model::Lstmed(m) => m.score_series(&Points::new(frame.values().to_vec(), d))?,
            Model::Lstmad(m) => m.score_series(&Points::new(frame.values().to_vec(), d))?,
            Model::Luminol(m) => m.score_series(&frame.column(m.target()))?,
        })
    }
}

/// A detector after `fit`: the spec, the training columns, the trained state
/// and the decision threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedDetector {
    spec: DetectorSpec,
    columns: Vec<String>,
    model: Model,
    threshold: f64,
}

/// Fits `spec` on `train` and sets the threshold to the
/// `(1 - contamination)`-quantile of the training scores.
pub fn fit(spec: &DetectorSpec, train: &TimeSeriesFrame) -> Result<FittedDetector> {
    let algorithm = spec.algorithm().name();
    if train.is_empty() {
        return Err(DetectError::TooFewRows { algorithm, needed: 1, got: 0 });
    }
    if train.n_cols() == 0 {
        return Err(DetectError::Degenerate { algorithm, reason: "frame has no data columns".into() });
    }
    let model = Model::fit(spec, train)?;
    let scores = model.score(train)?;
    let threshold = quantile_linear(&scores, 1.0 - spec.contamination);
    if !threshold.is_finite() {
        return Err(DetectError::Degenerate { algorithm, reason: "training scores are not finite".into() });
    }
    Ok(FittedDetector { spec: spec.clone(), columns: train.columns().to_vec(), model, threshold })
}

impl FittedDetector {
    pub fn spec(&self) -> &DetectorSpec {
        &self.spec
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// Outlier score per row of `test`; higher is more outlying.
    pub fn decision_function(&self, test: &TimeSeriesFrame) -> Result<ScoreVector> {
        if test.columns() != self.columns.as_slice() {
            return Err(DetectError::ColumnMismatch { expected: self.columns.clone(), found: test.columns().to_vec() });
        }
        let scores = self.model.score(test)?;
        ScoreVector::new(scores).map_err(|_| DetectError::Degenerate {
            algorithm: self.spec.algorithm().name(),
            reason: "produced a non-finite score".into(),
        })
    }

    /// 1 where the score exceeds the threshold.
    pub fn predict(&self, test: &TimeSeriesFrame) -> Result<LabelVector> {
        Ok(self.label(&self.decision_function(test)?))
    }

    pub fn label(&self, scores: &[f64]) -> LabelVector {
        LabelVector::from_bools(scores.iter().map(|&s| s > self.threshold))
    }

    /// Writes the versioned binary dump: magic, format version, JSON body.
    pub fn save(&self, mut w: impl Write) -> Result<()> {
        let body = serde_json::to_vec(self).map_err(|e| DetectError::Model(e.to_string()))?;
        w.write_all(MAGIC)
            .and_then(|_| w.write_all(&FORMAT_VERSION.to_le_bytes()))
            .and_then(|_| w.write_all(&body))
            .map_err(|e| DetectError::Model(e.to_string()))
    }

    pub fn load(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes).map_err(|e| DetectError::Model(e.to_string()))?;
        if bytes.len() < 12 || &bytes[..8] != MAGIC {
            return Err(DetectError::Model("not an odkit model file".into()));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().expect("four bytes"));
        if version != FORMAT_VERSION {
            return Err(DetectError::Model(format!("unsupported model format version {version}")));
        }
        serde_json::from_slice(&bytes[12..]).map_err(|e| DetectError::Model(e.to_string()))
    }
}
