use thiserror::Error;

use crate::hypergraph::{Bipartition, MAX_VERTICES};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex count must be in 1..={MAX_VERTICES}, got {0}")]
    BadVertexCount(u64),

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u64, n: u32 },

    #[error("hyperedge must have at least 2 vertices, got {0}")]
    EdgeTooSmall(usize),

    #[error("repeated vertex {0} in hyperedge")]
    RepeatedVertex(u32),

    #[error("vertex subset must be nonempty")]
    EmptySubset,

    #[error("subset size must be in 1..={n}, got {k}")]
    BadSubsetSize { k: usize, n: u32 },

    #[error("bipartition side must be a nonempty proper subset of the {n} vertices")]
    ImproperBipartition { n: u32 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("hypergraph is not uniform")]
    NotUniform,

    #[error("hypergraph must be 2-uniform (an EPR graph)")]
    NotEprGraph,

    #[error("vertex count mismatch: {0} vs {1}")]
    VertexCountMismatch(u32, u32),

    #[error("{what}: {needed} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("r must satisfy 2 <= r <= n (n={n}, r={r})")]
    BadUniformity { n: u32, r: u32 },

    #[error("edge {{{0},{1}}} is not present")]
    MissingEdge(u32, u32),

    #[error("teleport needs three distinct vertices, got ({0},{1},{2})")]
    DegenerateTeleport(u32, u32, u32),

    #[error("op {index} is not applicable: {source}")]
    Replay {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("target must have exactly one edge absent from the source; {0}")]
    NotAGoodStep(String),

    #[error("cut {0} has smaller capacity in the source than in the target")]
    CapacityDeficit(Bipartition),

    #[error("{0}")]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}
