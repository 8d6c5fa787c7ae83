use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("entry {index} = {value} lies outside [0, 1]")]
    EntryOutOfRange { index: usize, value: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("set is not a subset of the enclosing set (vertex {0})")]
    NotSubset(usize),
    #[error("empty vertex subset")]
    EmptySubset,
    #[error("graph has no edges")]
    NoEdges,
    #[error("enumeration would exceed cap of {cap} items")]
    ExplosionCap { cap: usize },
    #[error("computation budget exceeded: {0}")]
    Budget(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("p({vertex}) is not a probability vector: {reason}")]
    NotProbability { vertex: usize, reason: String },
    #[error("support of p({vertex}) reaches vertex {target} outside radius {radius}")]
    SupportViolation {
        vertex: usize,
        target: usize,
        radius: usize,
    },
    #[error("component of size {size} exceeds bound {k}")]
    ComponentTooLarge { size: usize, k: usize },
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("no breakpoint threshold satisfies the averaged inequality (defect larger than claimed?)")]
    NoValidThreshold,
    #[error("oracle violated its contract on a subset of {subset_size} vertices: {reason}")]
    OracleViolation { subset_size: usize, reason: String },
    #[error("weight function is identically zero")]
    ZeroWeight,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("graph does not carry the expected hybrid structure: {0}")]
    NotHybrid(String),
    #[error("guaranteed bound violated: {0}")]
    BoundViolated(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("stage mismatch: {0}")]
    StageMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}
