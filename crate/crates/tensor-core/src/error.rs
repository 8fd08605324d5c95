use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("space mismatch: {0:?} vs {1:?}")]
    SpaceMismatch(Vec<usize>, Vec<usize>),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("invalid space tuple: {0}")]
    InvalidSpaces(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("position out of range: {0}")]
    OutOfRange(String),
    #[error("index space too large to address")]
    IndexOverflow,
    #[error("permutation size {got} does not match block size {expected}")]
    PermSize { expected: usize, got: usize },
    #[error("invalid permutation: {0:?}")]
    InvalidPerm(Vec<usize>),
    #[error("singular matrix")]
    Singular,
    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),
    #[error("unbalanced type: {0}")]
    Unbalanced(String),
    #[error("malformed network: {0}")]
    Network(String),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
}
