//! Neural detectors built on `odkit-nn`.

pub mod autoencoder;
mod common;
pub mod dagmm;
pub mod lstm_ad;
pub mod lstm_ed;

pub use autoencoder::AutoencoderModel;
pub use common::{MinMaxScaler, ZScaler};
pub use dagmm::DagmmModel;
pub use lstm_ad::LstmAdModel;
pub use lstm_ed::LstmEdModel;
