use thiserror::Error;

/// Errors raised by the rigidlab library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid hypergraph: {0}")]
    InvalidGraph(String),

    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("graph is not a tree")]
    NotATree,

    #[error("arity mismatch: expected {expected} points, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown metric id `{0}`")]
    UnknownMetric(String),

    #[error("unsupported metric configuration: {0}")]
    UnsupportedMetric(String),

    #[error("unsupported group for this operation: {0}")]
    UnsupportedGroup(String),

    #[error("enumeration needs {required} steps but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("affine map is not an isometry of `{0}`")]
    NotAnIsometry(String),

    #[error("orbit collides with itself after {period} steps")]
    OrbitPeriodic { period: usize },

    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),

    #[error("point index {index} not in a set of {len} points")]
    PointNotInSet { index: usize, len: usize },

    #[error("point set of size {have} too small: need at least {need}")]
    PointSetTooSmall { have: usize, need: usize },

    #[error("{0} is not a perfect square")]
    NotPerfectSquare(u64),

    #[error("could not draw {wanted} distinct points after {attempts} attempts")]
    SamplingExhausted { wanted: usize, attempts: usize },

    #[error("exhaustive search too large: {0}")]
    SearchTooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular system")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
