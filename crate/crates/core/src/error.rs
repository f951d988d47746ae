use thiserror::Error;

/// Errors from graph construction and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("malformed graph6 byte 0x{byte:02x} at offset {offset}")]
    MalformedGraph6 { offset: usize, byte: u8 },
    #[error("graph6 vertex count {0} not supported")]
    Graph6SizeUnsupported(u64),
    #[error("graph6 input truncated: expected {expected} data bytes, got {got}")]
    Graph6Truncated { expected: usize, got: usize },
    #[error("edge-list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
    #[error("color assigned to unknown vertex {vertex} (n = {n})")]
    ColorForUnknownVertex { vertex: usize, n: usize },
    #[error("unknown hard pair id {0:?}")]
    UnknownHardPair(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Raised when a dense coloring would exceed the configured memory budget.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("requested {needed} entries exceeds memory budget of {budget}")]
pub struct BudgetError {
    pub needed: u64,
    pub budget: u64,
}

/// Errors from permutation-group operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("image array of length {0} is not a bijection")]
    NotBijection(usize),
    #[error("domain size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("group is not transitive")]
    NotTransitive,
}

/// Index-space mismatch between two partitions.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("partition index spaces differ: {0} vs {1}")]
pub struct PartitionMismatch(pub usize, pub usize);
