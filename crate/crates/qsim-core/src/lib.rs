//! Dense statevector quantum circuit simulator.
//!
//! Simulates registers of up to 24 qubits with a fixed gate set (Hadamard,
//! Pauli-X, axis rotations, CNOT, controlled-RY, controlled phase, and dense
//! multi-qubit unitaries), named parameter slots with affine angle bindings,
//! Pauli-string observables, seeded measurement sampling, parameter-shift
//! gradients, and quantum Fourier transform builders.
//!
//! Conventions: qubit 0 is the least-significant bit of the basis-state
//! index, and bitstrings are rendered most-significant qubit first.

mod circuit;
mod error;
mod gate;
mod observable;
mod qft;
mod state;

pub use circuit::Circuit;
pub use error::{QsimError, Result};
pub use gate::{Angle, Gate, SlotId, MAX_QUBITS};
pub use observable::{Observable, Pauli};
pub use qft::{inverse_qft_circuit, qft_circuit};
pub use state::Statevector;
