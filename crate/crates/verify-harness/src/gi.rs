use std::fmt;

use invariant_engine::{distinguish, sn_orbit_oracle, ContractionInvariant, DEFAULT_ORBIT_CAP};
use reduction_catalog::{gi_encode, pipeline, GiMode, Graph, Reduction};
use tensor_core::Perm;

use crate::{HarnessError, Result};

/// Slot cap for fingerprints after the gi-to-peps pipeline.
pub const PEPS_FINGERPRINT_SLOTS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GiVerdict {
    /// Brute-force witness `σ` with `σ·G_1 = G_2`.
    pub isomorphism: Option<Perm>,
    /// Invariant separating the `S_n` encodings.
    pub sn_witness: Option<ContractionInvariant>,
    /// Invariant separating the encodings after gi-to-peps.
    pub peps_witness: Option<ContractionInvariant>,
}

impl GiVerdict {
    /// Isomorphic graphs have equal fingerprints; a witness implies non-isomorphism.
    pub fn consistent(&self) -> bool {
        self.isomorphism.is_none() || (self.sn_witness.is_none() && self.peps_witness.is_none())
    }
}

fn one_based(p: &Perm) -> String {
    if p.is_identity() {
        return "id".into();
    }
    let img: Vec<String> = p.images().iter().map(|v| (v + 1).to_string()).collect();
    format!("[{}]", img.join(","))
}

impl fmt::Display for GiVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.consistent() {
            return f.write_str("INCONSISTENT (isomorphic graphs with an invariant witness)");
        }
        match (&self.isomorphism, &self.sn_witness, &self.peps_witness) {
            (Some(p), _, _) => write!(f, "ISOMORPHIC (permutation witness {})", one_based(p)),
            (None, None, None) => f.write_str("NON-ISOMORPHIC (undistinguished at this degree)"),
            _ => f.write_str("NON-ISOMORPHIC (invariant witness)"),
        }
    }
}

/// Oracle verdict plus fingerprint comparisons before and after gi-to-peps; `peps_slots` 0 skips the latter.
pub fn gi_roundtrip(g1: &Graph, g2: &Graph, sn_slots: usize, peps_slots: usize) -> Result<GiVerdict> {
    let n = g1.n().max(g2.n());
    if n > DEFAULT_ORBIT_CAP {
        return Err(HarnessError::CapExceeded(n, DEFAULT_ORBIT_CAP));
    }
    let x = gi_encode(g1, GiMode::Sn)?;
    let y = gi_encode(g2, GiMode::Sn)?;
    if g1.n() != g2.n() {
        return Ok(GiVerdict { isomorphism: None, sn_witness: None, peps_witness: None });
    }
    let isomorphism = sn_orbit_oracle(&x, &y, DEFAULT_ORBIT_CAP)?;
    let sn_witness = distinguish(&x, &y, sn_slots)?;
    let peps_witness = if peps_slots == 0 {
        None
    } else {
        let p = pipeline("gi-to-peps")?;
        distinguish(&p.apply(&x)?, &p.apply(&y)?, peps_slots)?
    };
    Ok(GiVerdict { isomorphism, sn_witness, peps_witness })
}
