//! Quantum phase estimation of structural eigenfrequencies.
//!
//! Builds phase-estimation circuits around the time evolution of a
//! symmetric operator, runs them on the dense statevector simulator, and
//! decodes the ancilla histogram back into eigenvalue and frequency
//! estimates. The top-level [`qpe_modal`] entry point accepts a mass and
//! stiffness pencil, reduces it to standard symmetric form, embeds it into
//! a power-of-two dimension, and pairs the decoded frequencies with a
//! classical dense solve of the same model.
//!
//! Register layout: system qubits occupy the low indices, ancillas sit
//! above them, and ancilla `j` controls the `2^j`-th power of the
//! evolution unitary so the inverse Fourier transform reads the phase out
//! most significant bit first.

mod error;
mod estimate;
mod modal;
mod operator;
mod pipeline;

pub use error::{QpeError, Result};
pub use estimate::{phases_to_frequencies, EigenEstimate};
pub use modal::{qpe_modal, QpeModalEstimate, QpeModalReport};
pub use operator::{
    choose_evolution_time, embed_operator, evolution_unitary, padding_value, MAX_OPERATOR_DIM,
};
pub use pipeline::{
    ancilla_distribution, build_qpe_circuit, qpe_final_state, run_qpe, InputState, PhaseHistogram,
    QpeConfig, MAX_ANCILLA,
};
