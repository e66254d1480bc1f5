use num_complex::Complex64;

use crate::error::{FemError, Result};
use crate::modal::ModalResult;

/// Evaluation request for a frequency response function between two DOFs.
#[derive(Debug, Clone)]
pub struct FrfConfig {
    /// Modal damping ratio per mode, each in `[0, 1)`.
    pub damping_ratios: Vec<f64>,
    /// Excitation frequencies in rad/s.
    pub omega_grid: Vec<f64>,
    pub input_dof: usize,
    pub output_dof: usize,
}

/// One FRF sample. `singular` marks an excitation frequency that hits an
/// undamped resonance exactly, where the modal sum diverges; `value` then
/// carries only the contribution of the remaining modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FrfPoint {
    pub omega: f64,
    pub value: Complex64,
    pub singular: bool,
}

/// Modal-superposition frequency response between `input_dof` and
/// `output_dof`:
/// `H(w) = sum_i Phi[p][i] * Phi[q][i] / (w_i^2 - w^2 + 2i zeta_i w_i w)`.
///
/// Rigid-body modes are excluded from the sum; their zero frequency and zero
/// damping would otherwise divide by zero at `w = 0`. The formula is
/// symmetric in the two DOFs, so `H_pq = H_qp` exactly.
pub fn frf(modal: &ModalResult, cfg: &FrfConfig) -> Result<Vec<FrfPoint>> {
    if cfg.damping_ratios.len() != modal.n_modes() {
        return Err(FemError::DampingCountMismatch {
            expected: modal.n_modes(),
            got: cfg.damping_ratios.len(),
        });
    }
    for (index, &zeta) in cfg.damping_ratios.iter().enumerate() {
        if !(0.0..1.0).contains(&zeta) {
            return Err(FemError::DampingOutOfRange { index, value: zeta });
        }
    }
    for dof in [cfg.input_dof, cfg.output_dof] {
        if dof >= modal.n_dof() {
            return Err(FemError::DofOutOfRange { dof, n_dof: modal.n_dof() });
        }
    }

    let phi = modal.mode_shapes();
    Ok(cfg
        .omega_grid
        .iter()
        .map(|&omega| {
            let mut value = Complex64::new(0.0, 0.0);
            let mut singular = false;
            for i in 0..modal.n_modes() {
                if modal.rigid()[i] {
                    continue;
                }
                let w_i = modal.omegas()[i];
                let denom = Complex64::new(
                    w_i * w_i - omega * omega,
                    2.0 * cfg.damping_ratios[i] * w_i * omega,
                );
                if denom == Complex64::new(0.0, 0.0) {
                    singular = true;
                    continue;
                }
                value += phi[(cfg.output_dof, i)] * phi[(cfg.input_dof, i)] / denom;
            }
            FrfPoint { omega, value, singular }
        })
        .collect())
}
