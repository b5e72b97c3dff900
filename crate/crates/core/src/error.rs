use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("vertex address {address} out of range for a tree with {vertices} vertices")]
    BadVertexAddress { address: usize, vertices: usize },
    #[error("circle address {0} does not resolve to a circle")]
    BadCircleAddress(String),
    #[error("colour mismatch at input {slot}: expected {expected}, found {found}")]
    ColourMismatch {
        slot: usize,
        expected: String,
        found: String,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("label set mismatch: {0}")]
    LabelMismatch(String),
    #[error("element outside filtration level {level}: {element}")]
    Filtration { level: u32, element: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("category axiom violated: {0}")]
    CategoryAxiom(String),
    #[error("functor law violated: {0}")]
    FunctorLaw(String),
    #[error("category is not loop-free: {0}")]
    NotLoopFree(String),
}
