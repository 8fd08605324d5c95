//! Contraction invariants of tensor tuple representations.
//!
//! An invariant is a full contraction of copies of the input tensors together with the
//! fundamental invariant tensors of the group. Fingerprints evaluate all invariants up to a
//! slot budget; a differing value certifies that two instances are not closure equivalent.

mod enumerate;
mod error;
mod fundamentals;
mod invariant;
mod network;
mod oracle;
mod signature;

pub use enumerate::{
    distinguish, enumerate_invariants, enumerate_invariants_with_budget, enumerate_raw, fingerprint,
    DEFAULT_MAX_SLOTS, DEFAULT_WIRING_BUDGET,
};
pub use error::InvariantError;
pub use fundamentals::{fundamental_kinds, fundamental_tensors, FundamentalKind};
pub use invariant::{evaluate, ContractionInvariant};
pub use network::{simplify_forms, Network, NodeKind, Slot};
pub use oracle::{sn_orbit_oracle, DEFAULT_ORBIT_CAP};
pub use signature::{Instance, Signature};

pub type Result<T> = std::result::Result<T, InvariantError>;
