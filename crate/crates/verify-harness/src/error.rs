use invariant_engine::InvariantError;
use reduction_catalog::ReductionError;
use tensor_core::TensorError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("unknown reduction {0:?}")]
    UnknownReduction(String),
    #[error("{0} does not carry the required flag: {1}")]
    MissingFlag(String, &'static str),
    #[error("graph on {0} vertices exceeds the brute-force cap {1}")]
    CapExceeded(usize, usize),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}
