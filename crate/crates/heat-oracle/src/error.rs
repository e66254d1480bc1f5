use thiserror::Error;

/// Errors from mesh construction, diffusion stepping, and dataset handling.
#[derive(Debug, Error, PartialEq)]
pub enum HeatError {
    #[error("grid must be at least 2x2, got {nx}x{ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("vertex {vertex} out of range for {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge ({v}, {w})")]
    DuplicateEdge { v: usize, w: usize },
    #[error("vertex {vertex} has degree {degree}, above the cap {max}")]
    DegreeTooLarge { vertex: usize, degree: usize, max: usize },
    #[error("mesh does not carry grid dimensions; build it with build_grid_mesh")]
    NotAGrid,
    #[error(
        "explicit update unstable: alpha_dt {alpha_dt} times max degree {max_degree} must stay below 1"
    )]
    Unstable { alpha_dt: f64, max_degree: usize },
    #[error("source power must be nonnegative, got {0}")]
    NegativeSourcePower(f64),
    #[error("alpha_dt must be nonnegative, got {0}")]
    NegativeAlpha(f64),
    #[error("non-finite temperature at vertex {vertex}")]
    NonFiniteValue { vertex: usize },
    #[error("frame has {got} values but the mesh has {expected} vertices")]
    FrameSizeMismatch { expected: usize, got: usize },
    #[error("laser path covers {path_len} steps but {steps} were requested")]
    PathTooShort { steps: usize, path_len: usize },
    #[error(
        "rectangle from ({x0}, {y0}) spanning {width}x{height} cells exceeds the {nx}x{ny} grid"
    )]
    RectOutOfBounds { x0: usize, y0: usize, width: usize, height: usize, nx: usize, ny: usize },
    #[error("rectangle sides must be at least one cell")]
    EmptyRect,
    #[error("dwell must be at least 1")]
    ZeroDwell,
    #[error("validation fraction must lie in [0, 1), got {0}")]
    BadValFraction(f64),
    #[error("dataset file is empty; expected a header line")]
    MissingHeader,
    #[error("dataset line {line}: {reason}")]
    DatasetFormat { line: usize, reason: String },
    #[error("unsupported dataset format version {found}")]
    UnsupportedFormatVersion { found: u32 },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for HeatError {
    fn from(e: std::io::Error) -> Self {
        HeatError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HeatError>;
