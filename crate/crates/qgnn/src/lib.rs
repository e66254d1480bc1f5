//! Quantum graph surrogate for mesh-based field prediction.
//!
//! A trained model maps a per-vertex temperature frame to the next frame by
//! running one small parameterized circuit per vertex: the vertex and its
//! neighbors become a star graph of qubits, temperatures enter as rotation
//! angles, and the prediction is read off the root qubit's Z expectation.
//! Parameters are shared across all vertices of equal degree, which makes the
//! model independent of vertex labeling and reusable on meshes it was never
//! trained on, as long as their degrees are covered.
//!
//! The pieces:
//! - [`Scaler`] / [`fit_scaler`]: affine map between physical temperature
//!   values and the unit interval the encoding expects.
//! - [`QgnnModel`] / [`build_submodel_circuit`] / [`submodel_predict`]: the
//!   per-degree circuits and their readout.
//! - [`model_predict`] / [`rollout`]: whole-graph single-step and
//!   autoregressive prediction.
//! - [`loss_mse`] / [`grad_loss`] / [`train`]: full-batch gradient descent
//!   with exact parameter-shift gradients.
//! - [`transfer_evaluate`]: loss of a frozen model on another mesh.

mod error;
mod model;
mod predict;
mod scaler;
mod train;

pub use error::{QgnnError, Result};
pub use model::{
    build_submodel_circuit, submodel_predict, DegreeParams, QgnnModel, MODEL_FORMAT_VERSION,
    SLOT_GAMMA, SLOT_THETA_E, SLOT_THETA_N,
};
pub use predict::{model_predict, rollout};
pub use scaler::{fit_scaler, Scaler};
pub use train::{
    grad_loss, loss_mse, train, transfer_evaluate, BatchMode, GradMap, Optimizer, TrainConfig,
    TrainPair, TrainReport,
};
