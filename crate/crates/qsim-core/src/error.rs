use thiserror::Error;

/// Errors raised by state preparation, gate application, circuit evaluation,
/// sampling, and gradient computation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QsimError {
    #[error("basis index {index} out of range for {n_qubits} qubit(s)")]
    BasisIndexOutOfRange { index: usize, n_qubits: usize },

    #[error("{requested} qubits requested but at most {max} are supported")]
    QubitCapExceeded { requested: usize, max: usize },

    #[error("qubit index {qubit} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("gate target and control qubits must be distinct")]
    OverlappingWires,

    #[error("amplitude vector of length {len} is not a power of two")]
    NonPowerOfTwoLength { len: usize },

    #[error("state norm {norm} too far from 1 to normalize safely")]
    NotNormalizable { norm: f64 },

    #[error("dense gate matrix is {rows}x{cols}, expected square of dimension 2^{n_targets}")]
    DenseShapeMismatch {
        rows: usize,
        cols: usize,
        n_targets: usize,
    },

    #[error("dense gate matrix is not unitary: max |U^H U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("parameter slot `{0}` referenced by a gate is not declared on the circuit")]
    UndeclaredSlot(String),

    #[error("parameter slot `{0}` has no bound value")]
    UnboundSlot(String),

    #[error("gate at position {position} is parameterized but has no parameter-shift rule")]
    NoShiftRule { position: usize },

    #[error("observable term has {term_len} Pauli letters, state has {n_qubits} qubit(s)")]
    ObservableSizeMismatch { term_len: usize, n_qubits: usize },

    #[error("circuit acts on {circuit} qubit(s) but the state has {state}")]
    RegisterSizeMismatch { circuit: usize, state: usize },

    #[error("sampling requires at least one shot")]
    ZeroShots,
}

pub type Result<T> = std::result::Result<T, QsimError>;
