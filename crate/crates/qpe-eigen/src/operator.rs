use std::f64::consts::TAU;

use fem_oracle::{jacobi_eigen, HermitianOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QpeError, Result};

/// Largest operator dimension the pipeline accepts (12 system qubits).
pub const MAX_OPERATOR_DIM: usize = 1 << 12;

/// Time evolution operator `U = e^{+iHt}`, computed exactly through the
/// spectral decomposition of `H`.
///
/// The positive sign makes every eigenvalue `lambda` show up as the positive
/// phase fraction `lambda * t / (2 pi)`, so phase readout needs no
/// two's-complement handling.
pub fn evolution_unitary(h: &HermitianOperator, t: f64) -> Result<DMatrix<Complex64>> {
    if !(t > 0.0) {
        return Err(QpeError::NonPositiveTime(t));
    }
    if h.dim() > MAX_OPERATOR_DIM {
        return Err(QpeError::DimTooLarge { dim: h.dim(), max: MAX_OPERATOR_DIM });
    }
    let eig = jacobi_eigen(h.matrix())?;
    let dim = h.dim();
    let v = eig.vectors.map(|x| Complex64::new(x, 0.0));
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        eig.values.iter().map(|&l| Complex64::from_polar(1.0, l * t)),
    ));
    Ok(&v * phases * v.adjoint())
}

/// Diagonal value used to pad an operator to power-of-two dimension: 10%
/// above the Gershgorin bound when that is positive, otherwise one unit
/// above it. Strictly exceeds every physical eigenvalue either way.
pub fn padding_value(gershgorin_bound: f64) -> f64 {
    if gershgorin_bound > 0.0 {
        1.1 * gershgorin_bound
    } else {
        gershgorin_bound + 1.0
    }
}

/// Pads `H` to the next power-of-two dimension with `padding_value` on the
/// new diagonal entries, leaving the physical block untouched. The padded
/// eigenvalues sit strictly above the physical spectrum, so their phase bins
/// are identifiable and excludable downstream. Operators already sized to a
/// power of two come back unchanged.
pub fn embed_operator(h: &HermitianOperator) -> HermitianOperator {
    let dim = h.dim();
    if dim.is_power_of_two() {
        return h.clone();
    }
    let padded_dim = dim.next_power_of_two();
    let pad = padding_value(h.gershgorin_bound());
    let mut matrix = DMatrix::zeros(padded_dim, padded_dim);
    matrix.view_mut((0, 0), (dim, dim)).copy_from(h.matrix());
    for i in dim..padded_dim {
        matrix[(i, i)] = pad;
    }
    HermitianOperator::new(matrix).expect("padding preserves symmetry")
}

/// Evolution time making the largest expected eigenvalue land exactly on the
/// top phase-grid point: `t = 2 pi (1 - 2^-n_ancilla) / lambda_upper`.
/// Every eigenvalue at or below `lambda_upper` then maps to a phase below 1,
/// so nothing aliases.
pub fn choose_evolution_time(lambda_upper: f64, n_ancilla: usize) -> Result<f64> {
    if !(lambda_upper > 0.0) {
        return Err(QpeError::NonPositiveBound(lambda_upper));
    }
    Ok(TAU * (1.0 - 0.5f64.powi(n_ancilla as i32)) / lambda_upper)
}
