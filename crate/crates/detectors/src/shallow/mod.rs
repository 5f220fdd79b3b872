//! Fixed-length shallow detectors. Every model scores one row at a time.

mod cblof;
mod hbos;
mod iforest;
mod knn;
mod lof;
mod neighbors;
mod ocsvm;
mod pca;
mod sod;

pub use cblof::{partition_clusters, CblofModel};
pub use hbos::HbosModel;
pub use iforest::{average_path_length, IforestModel};
pub use knn::KnnModel;
pub use lof::LofModel;
pub use neighbors::{euclidean, k_nearest, Points};
pub use ocsvm::OcsvmModel;
pub use pca::PcaModel;
pub use sod::{subspace_score, SodModel};
