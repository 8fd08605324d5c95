use cone_hilbert::ConeError;
use invariant_engine::InvariantError;
use tensor_core::TensorError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("schema mismatch at {stage}: {reason}")]
    Schema { stage: String, reason: String },
    #[error("{0} carries no pullback witness")]
    NoWitness(String),
    #[error("malformed graph: {0}")]
    Graph(String),
    #[error("unknown reduction or pipeline {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

impl ReductionError {
    pub(crate) fn schema(stage: &str, reason: impl Into<String>) -> Self {
        ReductionError::Schema { stage: stage.to_string(), reason: reason.into() }
    }
}
