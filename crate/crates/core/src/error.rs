use thiserror::Error;

pub type Result<T, E = VsepError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum VsepError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("line {line}: edge ({u}, {v}) is not listed symmetrically with equal weight")]
    AsymmetricEdge { line: usize, u: usize, v: usize },

    #[error("vertex {vertex}: weight {weight} is not positive")]
    NonPositiveWeight { vertex: usize, weight: f64 },

    #[error("invalid edge weight {weight} on ({u}, {v})")]
    InvalidEdgeWeight { u: usize, v: usize, weight: f64 },

    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid separator: edge ({u}, {v}) joins the two shores")]
    InvalidSeparator { u: usize, v: usize },

    #[error("instance of size {n} exceeds the cap of {cap}")]
    SizeCap { n: usize, cap: usize },
}
