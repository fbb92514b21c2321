use thiserror::Error;

/// Errors raised by the library. Every variant names the offending entity.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ray norm {norm} deviates from 1 by more than {tolerance}")]
    RayNorm { norm: f64, tolerance: f64 },
    #[error("ray has zero or non-finite norm")]
    DegenerateRay,
    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates by {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("no vertices bound to rays")]
    NoRays,
    #[error("overlap {0} is not in [0, 1)")]
    InvalidOverlap(f64),
    #[error("rays {i} and {j} are parallel (overlap {overlap})")]
    ParallelRays { i: usize, j: usize, overlap: f64 },
    #[error("vertex index {index} out of range for {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },
    #[error("hyper-edge ({i}, {j}) is a self-loop")]
    SelfLoop { i: usize, j: usize },
    #[error("duplicate hyper-edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },
    #[error("hyper-graph must have at least one vertex")]
    EmptyGraph,
    #[error("ray count {rays} does not match vertex count {vertices}")]
    RayCountMismatch { rays: usize, vertices: usize },
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("weight list has {given} entries but the family has {expected} hyper-edges")]
    WeightCountMismatch { given: usize, expected: usize },
    #[error("hyper-edge ({i}, {j}) is excluded by the weight cap {cap} (overlap {overlap})")]
    EdgeAboveCap { i: usize, j: usize, cap: u32, overlap: f64 },
    #[error("assignment has {given} values but the graph has {expected} vertices")]
    AssignmentSize { given: usize, expected: usize },
    #[error("value {value} for vertex {vertex} is not 0 or 1")]
    NotBoolean { vertex: usize, value: u8 },
    #[error("vertex {vertex} is forced to both 0 and 1")]
    ConflictingForce { vertex: usize },
    #[error("operation needs at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("fragment has {0} core vertices, expected 2")]
    NotAFragment(usize),
    #[error("graph carries no basis metadata")]
    NoBases,
    #[error("vertex {vertex} is not bound to a ray")]
    UnboundRay { vertex: usize },
    #[error(
        "hyper-edge ({i}, {j}) has weight {weight} but overlap {overlap} needs at least {required}"
    )]
    Unrealizable { i: usize, j: usize, weight: u32, required: u32, overlap: f64 },
    #[error("missing coordinates: got {given} rays for {expected} vertices")]
    MissingCoordinates { given: usize, expected: usize },
    #[error("graph has {size} vertices, above the {what} limit of {limit}; {hint}")]
    Capacity { what: &'static str, size: usize, limit: usize, hint: &'static str },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// Capacity errors are reported separately from validation errors.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
