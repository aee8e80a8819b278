use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge list contains no nodes")]
    EmptyGraph,

    #[error("node id {node} out of range (graph has {count} nodes)")]
    NodeOutOfRange { node: u32, count: usize },

    #[error("node {node} is already in the seed set")]
    AlreadySelected { node: u32 },

    #[error("k = {k} exceeds node count {count}")]
    KTooLarge { k: usize, count: usize },

    #[error("probability file has no entry for edge {u} -> {v}")]
    MissingEdgeProbability { u: u64, v: u64 },

    #[error("weight file has no entry for node {label}")]
    MissingNodeWeight { label: u64 },

    #[error("exact enumeration supports at most {limit} edges, graph has {edges}")]
    TooManyEdges { edges: usize, limit: usize },

    #[error("simple-path budget of {budget} steps exhausted; raise the budget or use a larger theta")]
    PathBudgetExceeded { budget: u64 },

    #[error("theta formula rejected: {0}")]
    ThetaFormula(String),

    #[error("reachability cache mismatch: {0}")]
    CacheMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
