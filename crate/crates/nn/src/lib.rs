//! A small, dependency-light neural toolkit in `f64`.
//!
//! Parameters of a whole network live in one flat `Vec<f64>`; layers are
//! descriptors holding offsets into it. Gradients use the same layout, so the
//! optimizer and the finite-difference checker work on plain slices.

mod adam;
mod error;
mod gradcheck;
mod init;
mod layers;
pub mod linalg;
mod lstm;
mod tensor;

pub use adam::Adam;
pub use error::{NnError, Result};
pub use gradcheck::{check_gradients, relative_error, GradCheck};
pub use init::ParamBuilder;
pub use layers::{dense_forward, mse, Activation, Dense, DenseCache, Mlp, MlpCache};
pub use lstm::{lstm_step, LstmCache, LstmCell, LstmGrad};
pub use tensor::Tensor2;
