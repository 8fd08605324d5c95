//! Exact sparse mixed tensors over tuples of coordinate spaces.
//!
//! A [`MixedTensor`] lives in `⊗_i V_i^{⊗a_i} ⊗ (V_i^*)^{⊗b_i}` with `V_i = F^{n_i}`
//! and `F` either the rationals or the Gaussian rationals. Factors are ordered by space,
//! and within a space the contravariant block comes before the covariant block.
//! Positions and permutations are 0-based in this API unless a constructor says otherwise.

mod error;
mod group;
mod matrix;
mod network;
mod perm;
mod scalar;
mod space;
mod tensor;

pub use error::TensorError;
pub use group::{GroupElement, GroupTag};
pub use matrix::Matrix;
pub use network::{NetworkEdge, TensorNetwork};
pub use perm::Perm;
pub use scalar::{Field, Scalar};
pub use space::{SpaceTuple, TensorType};
pub use tensor::{MixedTensor, PartialBijection};

pub type Result<T> = std::result::Result<T, TensorError>;
