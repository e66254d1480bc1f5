use thiserror::Error;

/// Errors raised across the phase-estimation pipeline.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QpeError {
    #[error("ancilla count {requested} outside the supported range 1..=12")]
    AncillaCount { requested: usize },

    #[error("at least one shot is required")]
    ZeroShots,

    #[error("evolution time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("evolution time is unset; pass one or use the modal pipeline, which picks it")]
    MissingTime,

    #[error("eigenvalue upper bound must be positive, got {0}")]
    NonPositiveBound(f64),

    #[error("operator dimension {dim} exceeds the supported maximum {max}")]
    DimTooLarge { dim: usize, max: usize },

    #[error("operator dimension {dim} is not a power of two; embed it first")]
    NotEmbedded { dim: usize },

    #[error("eigenvector index {index} out of range for {n_modes} mode(s)")]
    UnknownEigenvector { index: usize, n_modes: usize },

    #[error("custom input state has {len} entries but the operator dimension is {dim}")]
    CustomStateTooLong { len: usize, dim: usize },

    #[error("custom input state has zero norm")]
    ZeroNormState,

    #[error("weight threshold {0} outside [0, 1)")]
    BadWeightThreshold(f64),

    #[error(transparent)]
    Sim(#[from] qsim_core::QsimError),

    #[error(transparent)]
    Fem(#[from] fem_oracle::FemError),
}

pub type Result<T> = std::result::Result<T, QpeError>;
