use std::collections::HashMap;

use invariant_engine::{ContractionInvariant, Network, Slot};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::{Pullback, ReductionError, Result};

/// Target network under construction, with the image of every source slot.
pub(crate) struct Rewrite {
    pub net: Network,
    contra: HashMap<(usize, Slot), (usize, Slot)>,
    co: HashMap<(usize, Slot), (usize, Slot)>,
}

impl Rewrite {
    pub fn new(net: Network) -> Self {
        Rewrite { net, contra: HashMap::new(), co: HashMap::new() }
    }

    pub fn contra(&mut self, space: usize, from: Slot, to_space: usize, to: Slot) {
        self.contra.insert((space, from), (to_space, to));
    }

    pub fn co(&mut self, space: usize, from: Slot, to_space: usize, to: Slot) {
        self.co.insert((space, from), (to_space, to));
    }

    /// Transfers every source wire through the slot maps.
    pub fn finish(mut self, src: &Network) -> Result<Network> {
        for (i, a, b) in src.wires() {
            let miss = || ReductionError::Invariant(invariant_engine::InvariantError::Network(format!("unmapped slot in space {i}")));
            let &(sa, ta) = self.contra.get(&(i, a)).ok_or_else(miss)?;
            let &(sb, tb) = self.co.get(&(i, b)).ok_or_else(miss)?;
            if sa != sb {
                return Err(ReductionError::Invariant(invariant_engine::InvariantError::Network(format!(
                    "wire crosses target spaces {sa} and {sb}"
                ))));
            }
            self.net.wire(sa, ta, tb)?;
        }
        Ok(self.net)
    }
}

pub(crate) fn pow_dims(dims: &[usize], loops: &[usize]) -> BigRational {
    let mut f = BigRational::one();
    for (&n, &l) in dims.iter().zip(loops) {
        f *= BigRational::from_integer(BigInt::from(n).pow(l as u32));
    }
    f
}

/// Strips identity nodes and packages the result.
pub(crate) fn finish_pullback(net: &Network, dims: &[usize], c: u32, factor: BigRational) -> Result<Pullback> {
    let (net, loops) = net.remove_identities()?;
    let invariant: ContractionInvariant = net.to_invariant()?;
    let total = c + loops.iter().sum::<usize>() as u32;
    Ok(Pullback { invariant, c: total, factor: factor / pow_dims(dims, &loops) })
}
