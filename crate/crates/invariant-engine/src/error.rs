use tensor_core::TensorError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unbalanced wiring: {0}")]
    Unbalanced(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("malformed network: {0}")]
    Network(String),
}
