//! Classical structural dynamics at desk scale: finite element assembly for
//! axial bars and grid membranes, generalized modal analysis through a
//! Cholesky reduction and a cyclic Jacobi eigensolver, and modal-superposition
//! frequency response synthesis.
//!
//! All functions are pure and the matrix types immutable after construction,
//! so concurrent use on distinct inputs needs no synchronization. Units are
//! assumed consistent (SI or any coherent system) and never converted.

mod assemble;
mod error;
mod frf;
mod jacobi;
mod matrices;
mod modal;

pub use assemble::{assemble_bar, assemble_membrane};
pub use error::{FemError, Result};
pub use frf::{frf, FrfConfig, FrfPoint};
pub use jacobi::{jacobi_eigen, JacobiEigen};
pub use matrices::{FemMatrices, HermitianOperator};
pub use modal::{modal_analysis, reduce_generalized, ModalResult};
