use thiserror::Error;

/// Errors raised by graph construction and the algorithms built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("bad sign {0}, expected +1 or -1")]
    BadSign(i64),
    #[error("sequence is not a walk: {0}-{1} is not an edge")]
    NotAWalk(usize, usize),
    #[error("graphs have different underlying graphs")]
    DifferentUnderlyingGraph,
    #[error("graph is not a single cycle")]
    NotACycle,
    #[error("factor list is empty")]
    EmptyList,
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("target order {0} exceeds the supported maximum of 6")]
    OrderTooLarge(usize),
    #[error("graph of order {0} is too large for brute-force isomorphism")]
    TooLarge(usize),
    #[error("chromatic number search stopped: known interval [{lower}, {}]", upper.map_or("?".to_string(), |u| u.to_string()))]
    BoundExceeded { lower: usize, upper: Option<usize> },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("graph is not a {rows}x{cols} grid")]
    NotAGrid { rows: usize, cols: usize },
    #[error("grid has {0} rows; at most 4 are supported")]
    TooManyRows(usize),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
