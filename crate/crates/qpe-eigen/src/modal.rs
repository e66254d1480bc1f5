use std::f64::consts::TAU;

use fem_oracle::{jacobi_eigen, modal_analysis, reduce_generalized, FemMatrices};

use crate::error::{QpeError, Result};
use crate::estimate::phases_to_frequencies;
use crate::operator::{choose_evolution_time, embed_operator, padding_value};
use crate::pipeline::{run_qpe, InputState, PhaseHistogram, QpeConfig};

/// Relative eigenvalue threshold below which a classical mode counts as
/// rigid; matches the default used by the classical reporting paths.
const RIGID_TOL: f64 = 1e-9;

/// One decoded estimate paired against the classical oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct QpeModalEstimate {
    pub phase: f64,
    pub lambda: f64,
    pub omega: f64,
    pub weight: f64,
    /// Closest frequency from the classical modal solve.
    pub nearest_classical_omega: f64,
    /// Half-width, in rad/s around this estimate, of one phase-grid step:
    /// the worst-case frequency error a correctly-binned phase can carry.
    pub grid_resolution: f64,
}

/// Quantum and classical eigenfrequency analyses of one structure, with the
/// estimates paired to their nearest classical counterparts.
#[derive(Debug, Clone, PartialEq)]
pub struct QpeModalReport {
    pub n_ancilla: usize,
    /// Evolution time actually used (configured, or chosen from the
    /// spectral bound).
    pub evolution_time: f64,
    pub shots: u64,
    pub seed: u64,
    pub classical_omegas: Vec<f64>,
    pub histogram: PhaseHistogram,
    pub estimates: Vec<QpeModalEstimate>,
}

/// Distance between two phase fractions on the unit circle.
fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Runs the full estimation pipeline on a structural model and pairs the
/// result with the classical modal oracle.
///
/// Stages: Cholesky reduction to a symmetric operator, power-of-two
/// embedding, alias-free evolution-time selection from the embedded
/// operator's Gershgorin bound (unless the config pins a time), statevector
/// phase estimation, and phase decoding. Eigenvector-based input states are
/// resolved against the physical operator, so they carry no overlap with
/// padding coordinates; any bin at the padding eigenvalue's phase is
/// additionally dropped from the estimate list.
pub fn qpe_modal(fem: &FemMatrices, cfg: &QpeConfig) -> Result<QpeModalReport> {
    cfg.validate()?;
    let physical = reduce_generalized(fem)?;
    let embedded = embed_operator(&physical);
    let n_dof = physical.dim();

    // The bound must cover the padding diagonal too, or padded eigenvalues
    // would alias back into the physical phase range.
    let lambda_upper = embedded.gershgorin_bound();
    let t = match cfg.evolution_time {
        Some(t) => t,
        None => choose_evolution_time(lambda_upper, cfg.n_ancilla)?,
    };

    let input = match &cfg.input_state {
        InputState::ExactEigenvector(index) => {
            if *index >= n_dof {
                return Err(QpeError::UnknownEigenvector { index: *index, n_modes: n_dof });
            }
            let eig = jacobi_eigen(physical.matrix())?;
            let mut order: Vec<usize> = (0..n_dof).collect();
            order.sort_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]));
            eig.vectors.column(order[*index]).iter().copied().collect()
        }
        InputState::Uniform => {
            let eig = jacobi_eigen(physical.matrix())?;
            let scale = 1.0 / (n_dof as f64).sqrt();
            let mut state = vec![0.0; n_dof];
            for col in 0..n_dof {
                for row in 0..n_dof {
                    state[row] += scale * eig.vectors[(row, col)];
                }
            }
            state
        }
        InputState::Custom(v) => {
            if v.len() > n_dof {
                return Err(QpeError::CustomStateTooLong { len: v.len(), dim: n_dof });
            }
            v.clone()
        }
    };

    let run_cfg = QpeConfig {
        evolution_time: Some(t),
        input_state: InputState::Custom(input),
        ..cfg.clone()
    };
    let histogram = run_qpe(&embedded, &run_cfg)?;
    let mut decoded = phases_to_frequencies(&histogram, t, 0.0)?;

    if embedded.dim() != n_dof {
        let pad_phase = (padding_value(physical.gershgorin_bound()) * t / TAU).rem_euclid(1.0);
        let half_step = 0.5 / (1u64 << cfg.n_ancilla) as f64;
        decoded.retain(|e| phase_distance(e.phase, pad_phase) > half_step);
    }

    let classical = modal_analysis(fem, RIGID_TOL)?;
    let classical_omegas = classical.omegas().to_vec();
    let grid_lambda = TAU / (1u64 << cfg.n_ancilla) as f64 / t;
    let estimates = decoded
        .into_iter()
        .map(|e| {
            let nearest_classical_omega = classical_omegas
                .iter()
                .copied()
                .min_by(|a, b| {
                    (a - e.omega_estimate)
                        .abs()
                        .total_cmp(&(b - e.omega_estimate).abs())
                })
                .unwrap_or(f64::NAN);
            let up = (e.lambda_estimate + grid_lambda).sqrt();
            let down = (e.lambda_estimate - grid_lambda).max(0.0).sqrt();
            QpeModalEstimate {
                phase: e.phase,
                lambda: e.lambda_estimate,
                omega: e.omega_estimate,
                weight: e.weight,
                nearest_classical_omega,
                grid_resolution: (up - e.omega_estimate).max(e.omega_estimate - down),
            }
        })
        .collect();

    Ok(QpeModalReport {
        n_ancilla: cfg.n_ancilla,
        evolution_time: t,
        shots: cfg.shots,
        seed: cfg.seed,
        classical_omegas,
        histogram,
        estimates,
    })
}
