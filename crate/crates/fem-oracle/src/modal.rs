use nalgebra::{Cholesky, DMatrix};

use crate::error::{FemError, Result};
use crate::jacobi::jacobi_eigen;
use crate::matrices::{FemMatrices, HermitianOperator};

/// Natural frequencies and M-orthonormal mode shapes, ascending in
/// frequency. `rigid[i]` marks zero-frequency (rigid-body) modes, which the
/// frequency response sum skips.
#[derive(Debug, Clone)]
pub struct ModalResult {
    omegas: Vec<f64>,
    omega_squared: Vec<f64>,
    mode_shapes: DMatrix<f64>,
    rigid: Vec<bool>,
}

impl ModalResult {
    pub fn n_modes(&self) -> usize {
        self.omegas.len()
    }

    pub fn n_dof(&self) -> usize {
        self.mode_shapes.nrows()
    }

    /// Natural frequencies in rad/s, ascending.
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Generalized eigenvalues; tiny negative values from rounding are kept
    /// as computed here while `omegas` clamps them to zero.
    pub fn omega_squared(&self) -> &[f64] {
        &self.omega_squared
    }

    /// Mode shapes as columns, M-orthonormalized.
    pub fn mode_shapes(&self) -> &DMatrix<f64> {
        &self.mode_shapes
    }

    pub fn rigid(&self) -> &[bool] {
        &self.rigid
    }
}

/// Reduces the generalized problem `K x = lambda M x` to standard symmetric
/// form `H = L^-1 K L^-T` with `M = L L^T`; `H` has the same eigenvalues.
pub fn reduce_generalized(fem: &FemMatrices) -> Result<HermitianOperator> {
    let chol =
        Cholesky::new(fem.mass().clone()).ok_or(FemError::MassNotPositiveDefinite)?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(fem.stiffness())
        .ok_or(FemError::MassNotPositiveDefinite)?;
    let ht = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(FemError::MassNotPositiveDefinite)?;
    let h = ht.transpose();
    // The two triangular solves round asymmetrically; fold the result back
    // onto the symmetric manifold before the eigensolver sees it.
    let h = (&h + h.transpose()) * 0.5;
    HermitianOperator::new(h)
}

/// Full modal decomposition of a structure.
///
/// Solves the generalized eigenvalue problem through the Cholesky reduction
/// plus the Jacobi eigensolver, back-transforms the eigenvectors, normalizes
/// them against the mass matrix, and sorts modes by ascending frequency.
/// Modes with eigenvalue at most `rigid_tol` times the largest eigenvalue
/// are flagged as rigid-body modes. Each shape's sign is fixed so that its
/// largest-magnitude component is positive, making output deterministic.
pub fn modal_analysis(fem: &FemMatrices, rigid_tol: f64) -> Result<ModalResult> {
    let h = reduce_generalized(fem)?;
    let eig = jacobi_eigen(h.matrix())?;
    let chol =
        Cholesky::new(fem.mass().clone()).ok_or(FemError::MassNotPositiveDefinite)?;
    let phi = chol
        .l()
        .transpose()
        .solve_upper_triangular(&eig.vectors)
        .ok_or(FemError::MassNotPositiveDefinite)?;

    let n = eig.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.values[i].total_cmp(&eig.values[j]));

    let omega_squared: Vec<f64> = order.iter().map(|&i| eig.values[i]).collect();
    let mut mode_shapes = DMatrix::zeros(phi.nrows(), n);
    for (dst, &src) in order.iter().enumerate() {
        mode_shapes.set_column(dst, &phi.column(src));
    }

    for i in 0..n {
        let col = mode_shapes.column(i).clone_owned();
        let norm_sq = (fem.mass() * &col).dot(&col);
        let scale = 1.0 / norm_sq.sqrt();
        let mut col = col * scale;
        let lead = col
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(idx, _)| idx)
            .unwrap_or(0);
        if col[lead] < 0.0 {
            col = -col;
        }
        mode_shapes.set_column(i, &col);
    }

    let lambda_max = omega_squared.last().copied().unwrap_or(0.0).max(0.0);
    let rigid: Vec<bool> = omega_squared
        .iter()
        .map(|&l| l <= rigid_tol * lambda_max)
        .collect();
    let omegas: Vec<f64> = omega_squared.iter().map(|&l| l.max(0.0).sqrt()).collect();

    Ok(ModalResult { omegas, omega_squared, mode_shapes, rigid })
}
