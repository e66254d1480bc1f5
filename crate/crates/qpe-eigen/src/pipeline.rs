use std::collections::{BTreeMap, HashMap};

use fem_oracle::{jacobi_eigen, HermitianOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;
use qsim_core::{inverse_qft_circuit, Circuit, Gate, Statevector};

use crate::error::{QpeError, Result};
use crate::operator::{evolution_unitary, MAX_OPERATOR_DIM};

/// Largest ancilla register; 12 bits of phase is already far below sampling
/// noise for any realistic shot budget.
pub const MAX_ANCILLA: usize = 12;

/// Initial system-register state for a phase estimation run.
#[derive(Debug, Clone, PartialEq)]
pub enum InputState {
    /// The i-th eigenvector (ascending eigenvalue order) of the operator.
    ExactEigenvector(usize),
    /// Equal-weight superposition of all eigenvectors of the operator.
    Uniform,
    /// Amplitude-encoded coordinate vector, zero-padded to the register
    /// size and normalized. Loaded directly into the statevector; a real
    /// device would need a preparation circuit here.
    Custom(Vec<f64>),
}

/// Phase estimation run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct QpeConfig {
    pub n_ancilla: usize,
    /// Evolution time t in U = e^{iHt}. `None` lets the modal pipeline pick
    /// an alias-free time from the spectral bound.
    pub evolution_time: Option<f64>,
    pub shots: u64,
    pub seed: u64,
    pub input_state: InputState,
}

impl QpeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_ancilla < 1 || self.n_ancilla > MAX_ANCILLA {
            return Err(QpeError::AncillaCount { requested: self.n_ancilla });
        }
        if self.shots == 0 {
            return Err(QpeError::ZeroShots);
        }
        if let Some(t) = self.evolution_time {
            if !(t > 0.0) {
                return Err(QpeError::NonPositiveTime(t));
            }
        }
        Ok(())
    }
}

/// Measured ancilla-register outcomes. Keys are ancilla bitstrings, most
/// significant phase bit first; counts sum to `shots`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseHistogram {
    pub entries: BTreeMap<String, u64>,
    pub n_ancilla: usize,
    pub shots: u64,
}

/// Textbook phase-estimation circuit over `log2(dim U)` system qubits and
/// `n_ancilla` ancillas.
///
/// Layout: system on qubits `0..m`, ancillas on `m..m+n_ancilla`, with
/// ancilla `m+j` holding phase bit `j`. Hadamards put the ancillas in
/// superposition, ancilla `j` controls `U^(2^j)` (powered classically by
/// repeated squaring, exact at this scale), and an inverse QFT on the
/// ancilla block rotates the phase into the computational basis. Since the
/// register renders bitstrings most-significant qubit first, the first
/// `n_ancilla` characters of a sampled bitstring are the phase bits in
/// natural reading order.
pub fn build_qpe_circuit(u: &DMatrix<Complex64>, n_ancilla: usize) -> Result<Circuit> {
    let dim = u.nrows();
    if !dim.is_power_of_two() {
        return Err(QpeError::NotEmbedded { dim });
    }
    let m = dim.trailing_zeros() as usize;
    let mut circuit = Circuit::new(m + n_ancilla)?;
    for j in 0..n_ancilla {
        circuit.push(Gate::h(m + j))?;
    }
    let mut power = u.clone();
    for j in 0..n_ancilla {
        if j > 0 {
            power = &power * &power;
        }
        let targets: Vec<usize> = (0..m).collect();
        circuit.push(Gate::dense_unitary(targets, vec![m + j], power.clone())?)?;
    }
    circuit.extend_shifted(&inverse_qft_circuit(n_ancilla)?, m)?;
    Ok(circuit)
}

/// Resolves the configured input state to a normalized coordinate vector of
/// the operator's dimension.
fn resolve_input(h: &HermitianOperator, input: &InputState) -> Result<Vec<f64>> {
    let dim = h.dim();
    match input {
        InputState::ExactEigenvector(index) => {
            let eig = jacobi_eigen(h.matrix())?;
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]));
            let col = *order
                .get(*index)
                .ok_or(QpeError::UnknownEigenvector { index: *index, n_modes: dim })?;
            Ok(eig.vectors.column(col).iter().copied().collect())
        }
        InputState::Uniform => {
            let eig = jacobi_eigen(h.matrix())?;
            let scale = 1.0 / (dim as f64).sqrt();
            let mut state = vec![0.0; dim];
            for col in 0..dim {
                for row in 0..dim {
                    state[row] += scale * eig.vectors[(row, col)];
                }
            }
            Ok(state)
        }
        InputState::Custom(v) => {
            if v.len() > dim {
                return Err(QpeError::CustomStateTooLong { len: v.len(), dim });
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(QpeError::ZeroNormState);
            }
            let mut state = vec![0.0; dim];
            for (dst, src) in state.iter_mut().zip(v) {
                *dst = src / norm;
            }
            Ok(state)
        }
    }
}

/// Runs the estimation circuit and returns the full pre-measurement
/// statevector (system qubits low, ancillas high).
pub fn qpe_final_state(h: &HermitianOperator, cfg: &QpeConfig) -> Result<Statevector> {
    cfg.validate()?;
    let dim = h.dim();
    if !dim.is_power_of_two() {
        return Err(QpeError::NotEmbedded { dim });
    }
    if dim > MAX_OPERATOR_DIM {
        return Err(QpeError::DimTooLarge { dim, max: MAX_OPERATOR_DIM });
    }
    let t = cfg.evolution_time.ok_or(QpeError::MissingTime)?;
    let u = evolution_unitary(h, t)?;
    let circuit = build_qpe_circuit(&u, cfg.n_ancilla)?;

    let system = resolve_input(h, &cfg.input_state)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << circuit.n_qubits()];
    for (i, &x) in system.iter().enumerate() {
        amps[i] = Complex64::new(x, 0.0);
    }
    let initial = Statevector::from_amplitudes(amps)?;
    Ok(circuit.run(&HashMap::new(), &initial)?)
}

/// Exact pre-sampling probability of each ancilla value `x` (the marginal
/// over system qubits), indexed by the phase integer.
pub fn ancilla_distribution(state: &Statevector, n_ancilla: usize) -> Vec<f64> {
    let m = state.n_qubits() - n_ancilla;
    let mut probs = vec![0.0; 1 << n_ancilla];
    for (i, amp) in state.amplitudes().iter().enumerate() {
        probs[i >> m] += amp.norm_sqr();
    }
    probs
}

/// Full pipeline for one operator: simulate, then sample the ancilla
/// register `shots` times with the configured seed.
///
/// Sampling draws whole-register bitstrings and keeps the ancilla prefix,
/// which marginalizes the system register exactly.
pub fn run_qpe(h: &HermitianOperator, cfg: &QpeConfig) -> Result<PhaseHistogram> {
    let state = qpe_final_state(h, cfg)?;
    let full = state.sample(cfg.shots, cfg.seed)?;
    let mut entries: BTreeMap<String, u64> = BTreeMap::new();
    for (bitstring, count) in full {
        *entries.entry(bitstring[..cfg.n_ancilla].to_string()).or_insert(0) += count;
    }
    Ok(PhaseHistogram { entries, n_ancilla: cfg.n_ancilla, shots: cfg.shots })
}
