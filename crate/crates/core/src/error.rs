use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tree must have at least one vertex")]
    EmptyTree,

    #[error("vertex {vertex} is out of range for a tree on {n} vertices")]
    InvalidVertex { vertex: u32, n: usize },

    #[error("parent of vertex {vertex} is {parent}, expected a label in 1..{vertex}")]
    NotIncreasing { vertex: u32, parent: u32 },

    #[error("enumeration of increasing trees is limited to n <= {max}, got n = {n}")]
    EnumerationTooLarge { n: usize, max: usize },

    #[error("operation needs at least {min} vertices, tree has {n}")]
    TreeTooSmall { n: usize, min: usize },

    #[error("not a permutation of 1..={n}: {reason}")]
    NotAPermutation { n: usize, reason: String },

    #[error("edge list does not describe a tree: {0}")]
    NotATree(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed child-sibling code {0:?}: a non-empty code must start with 1")]
    MalformedCode(String),

    #[error("flip depth must be at least 2, got {0}")]
    InvalidFlipDepth(u32),

    #[error("requested {requested} vertices from a tree on {n}")]
    SizeOutOfRange { requested: usize, n: usize },

    #[error("invalid experiment configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
