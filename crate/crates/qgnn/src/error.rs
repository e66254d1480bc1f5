use heat_oracle::HeatError;
use qsim_core::QsimError;
use thiserror::Error;

/// Errors from scaling, circuit evaluation, training, and model files.
#[derive(Debug, Error, PartialEq)]
pub enum QgnnError {
    #[error("all samples share the value {0}; a scaler needs a nonzero range")]
    DegenerateScaler(f64),
    #[error("cannot fit a scaler to an empty dataset")]
    EmptyDataset,
    #[error("degree {degree} has no parameter set")]
    UnsupportedDegree { degree: usize },
    #[error("vertices {vertices:?} have degrees outside the supported set")]
    UnsupportedVertices { vertices: Vec<usize> },
    #[error("expected {expected} neighbor inputs, got {got}")]
    NeighborCountMismatch { expected: usize, got: usize },
    #[error("frame carries {got} values but the graph has {expected} vertices")]
    FrameSizeMismatch { expected: usize, got: usize },
    #[error("non-finite input value {0}")]
    NonFiniteInput(f64),
    #[error("learning rate must be finite and non-negative, got {0}")]
    BadLearningRate(f64),
    #[error("epoch count must be at least 1")]
    ZeroEpochs,
    #[error("momentum coefficient must lie in [0, 1), got {0}")]
    BadMomentum(f64),
    #[error("training diverged at epoch {epoch}: loss {loss}")]
    Diverged { epoch: usize, loss: f64 },
    #[error("rollout requires at least one step")]
    ZeroSteps,
    #[error("rollout diverged at step {step}: |{value}| exceeds 10x the scaler range")]
    RolloutDiverged { step: usize, value: f64 },
    #[error("model file: {0}")]
    ModelFormat(String),
    #[error("unsupported model format version {found}")]
    UnsupportedFormatVersion { found: u32 },
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Sim(#[from] QsimError),
    #[error(transparent)]
    Frame(#[from] HeatError),
}

impl From<std::io::Error> for QgnnError {
    fn from(e: std::io::Error) -> Self {
        QgnnError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, QgnnError>;
