use thiserror::Error;

/// Errors raised by matrix construction, assembly, the eigensolver, and
/// frequency response evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FemError {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("bar assembly needs at least one element")]
    TooFewElements,

    #[error("{nx}x{ny} grid is too small: {reason}")]
    GridTooSmall {
        nx: usize,
        ny: usize,
        reason: &'static str,
    },

    #[error("{which} matrix must be square, got {rows}x{cols}")]
    NotSquare {
        which: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("mass is {mass_dim}x{mass_dim} but stiffness is {stiffness_dim}x{stiffness_dim}")]
    SizeMismatch {
        mass_dim: usize,
        stiffness_dim: usize,
    },

    #[error("{which} matrix is not symmetric: max |A - A^T| = {deviation:.3e}")]
    NotSymmetric {
        which: &'static str,
        deviation: f64,
    },

    #[error("mass matrix is not positive definite (Cholesky factorization failed)")]
    MassNotPositiveDefinite,

    #[error("stiffness matrix is not positive semidefinite")]
    StiffnessNotPositiveSemidefinite,

    #[error(
        "Jacobi eigensolver did not converge in {sweeps} sweeps \
         (off-diagonal norm {off_norm:.3e}); the matrix is likely ill-conditioned"
    )]
    JacobiDidNotConverge { off_norm: f64, sweeps: usize },

    #[error("damping ratio {value} at mode {index} is outside [0, 1)")]
    DampingOutOfRange { index: usize, value: f64 },

    #[error("{expected} modes but {got} damping ratios supplied")]
    DampingCountMismatch { expected: usize, got: usize },

    #[error("DOF index {dof} out of range for a {n_dof}-DOF model")]
    DofOutOfRange { dof: usize, n_dof: usize },
}

pub type Result<T> = std::result::Result<T, FemError>;
