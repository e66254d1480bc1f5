use nalgebra::{Cholesky, DMatrix};

use crate::error::{FemError, Result};

/// Symmetry tolerance, relative to the largest matrix entry (floored at 1 so
/// near-zero matrices are judged absolutely).
const SYMMETRY_TOL: f64 = 1e-12;

fn symmetry_deviation(m: &DMatrix<f64>) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in i + 1..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    dev
}

fn check_symmetric(m: &DMatrix<f64>, which: &'static str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(FemError::NotSquare {
            which,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let scale = m.amax().max(1.0);
    let deviation = symmetry_deviation(m);
    if deviation > SYMMETRY_TOL * scale {
        return Err(FemError::NotSymmetric { which, deviation });
    }
    Ok(())
}

/// Mass and stiffness matrices of a discretized structure.
///
/// Construction enforces symmetry of both matrices, positive definiteness of
/// the mass, and positive semidefiniteness of the stiffness, so downstream
/// solvers can rely on a well-posed generalized eigenvalue problem.
#[derive(Debug, Clone, PartialEq)]
pub struct FemMatrices {
    n_dof: usize,
    mass: DMatrix<f64>,
    stiffness: DMatrix<f64>,
}

impl FemMatrices {
    pub fn new(mass: DMatrix<f64>, stiffness: DMatrix<f64>) -> Result<Self> {
        check_symmetric(&mass, "mass")?;
        check_symmetric(&stiffness, "stiffness")?;
        if mass.nrows() != stiffness.nrows() {
            return Err(FemError::SizeMismatch {
                mass_dim: mass.nrows(),
                stiffness_dim: stiffness.nrows(),
            });
        }
        if Cholesky::new(mass.clone()).is_none() {
            return Err(FemError::MassNotPositiveDefinite);
        }
        // Semidefiniteness probe: a small diagonal shift must make the
        // stiffness factorizable. Tolerates eigenvalues down to -1e-10
        // relative to the largest entry, which covers assembly rounding.
        let shift = 1e-10 * stiffness.amax().max(1.0);
        let shifted = &stiffness + DMatrix::identity(stiffness.nrows(), stiffness.ncols()) * shift;
        if Cholesky::new(shifted).is_none() {
            return Err(FemError::StiffnessNotPositiveSemidefinite);
        }
        Ok(FemMatrices {
            n_dof: mass.nrows(),
            mass,
            stiffness,
        })
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn mass(&self) -> &DMatrix<f64> {
        &self.mass
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }
}

/// A real symmetric operator, the standard-form image of a generalized
/// eigenvalue problem.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    matrix: DMatrix<f64>,
}

impl HermitianOperator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        check_symmetric(&matrix, "operator")?;
        Ok(HermitianOperator {
            dim: matrix.nrows(),
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Upper bound on the largest eigenvalue: the max over rows of the
    /// diagonal entry plus the absolute off-diagonal row sum.
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let off: f64 = (0..self.dim)
                    .filter(|&j| j != i)
                    .map(|j| self.matrix[(i, j)].abs())
                    .sum();
                self.matrix[(i, i)] + off
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
