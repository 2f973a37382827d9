use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a normal subgroup: {0}")]
    NotNormal(String),
    #[error("group is not transitive")]
    NotTransitive,
    #[error("cap exceeded: {what} is {value}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },
    #[error("invalid group specification: {0}")]
    InvalidGroupSpec(String),
    #[error("malformed group table: {0}")]
    MalformedTable(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("seed element is not an automorphism")]
    SeedNotAutomorphism,
    #[error("odd quotient undefined: {0}")]
    OddQuotientUndefined(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("interrupted after {completed} chunks")]
    Interrupted { completed: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
