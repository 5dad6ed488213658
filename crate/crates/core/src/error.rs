use thiserror::Error;

use crate::graph::MAX_VERTICES;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex count {0} is outside 1..={MAX_VERTICES}")]
    VertexCount(usize),

    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("adjacency rows are not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),

    #[error("removing every vertex leaves no graph")]
    EmptyGraph,

    #[error("graph contains a K4, expected a K4-free graph")]
    ContainsK4,

    #[error("graph6 parse error at byte {offset}: {message}")]
    Graph6 { offset: usize, message: String },

    #[error("{what} limited to {limit}, got {actual}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("graph has {actual} vertices, expected {expected}")]
    OrderMismatch { expected: usize, actual: usize },

    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
}
