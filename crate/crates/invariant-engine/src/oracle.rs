use tensor_core::{GroupElement, Perm};

use crate::error::InvariantError;
use crate::signature::Instance;
use crate::Result;

pub const DEFAULT_ORBIT_CAP: usize = 8;

/// Brute-force search for `π ∈ S_n` with `π·x = y`, for one space of dimension at most `cap`.
pub fn sn_orbit_oracle(x: &Instance, y: &Instance, cap: usize) -> Result<Option<Perm>> {
    if x.signature != y.signature {
        return Err(InvariantError::SignatureMismatch(format!("{} vs {}", x.signature, y.signature)));
    }
    if x.signature.m() != 1 {
        return Err(InvariantError::InvalidSignature("orbit oracle needs a single space".into()));
    }
    let n = x.signature.dims()[0];
    if n > cap {
        return Err(InvariantError::CapExceeded(format!("dimension {n} above orbit cap {cap}")));
    }
    for p in Perm::all(n) {
        let g = GroupElement::from_permutations(std::slice::from_ref(&p))?;
        if x.apply_group(&g)?.tensors == y.tensors {
            return Ok(Some(p));
        }
    }
    Ok(None)
}
