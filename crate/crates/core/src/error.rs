use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("hyperedge probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("hyperedge has no sources")]
    EmptySources,
    #[error("hyperedge destination {0} is also one of its sources")]
    DestinationInSources(String),
    #[error("hyperedge endpoint {0} is not a node of the graph")]
    UnknownNode(String),
    #[error("{uncertain} uncertain hyperedges exceed the enumeration cap of {cap}")]
    EnumerationCap { uncertain: usize, cap: usize },
    #[error("{combinations} seed combinations exceed the exhaustive-search cap of {cap}")]
    CombinationCap { combinations: u128, cap: u128 },
    #[error("seed budget {k} is invalid for a graph with {nodes} nodes")]
    InvalidBudget { k: usize, nodes: usize },
    #[error("seed node id {0} is out of range")]
    SeedOutOfRange(u32),
    #[error("hyperedge size {mu} exceeds the configured maximum of {limit}")]
    HyperedgeSizeLimit { mu: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("action log is empty")]
    EmptyLog,
    #[error("no embedding for {0}")]
    MissingEmbedding(String),
    #[error("cannot realize synthetic graph: {0}")]
    Infeasible(&'static str),
}
