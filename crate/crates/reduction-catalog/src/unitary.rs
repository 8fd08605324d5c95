use invariant_engine::{Instance, Signature};
use tensor_core::{Field, GroupElement, GroupTag};

use crate::util::{require_element, require_group};
use crate::{Reduction, ReductionError, Result};

const UNITARY: &str = "unitary_lift";

/// `x ↦ (x, x̂)` with `x̂` the conjugated, dualized tensor; conjugate-linear.
pub struct UnitaryLift;

impl UnitaryLift {
    fn check(src: &Signature) -> Result<()> {
        require_group(UNITARY, src, &[GroupTag::U])?;
        if src.field != Field::Qi {
            return Err(ReductionError::schema(UNITARY, "field must be Q(i)"));
        }
        Ok(())
    }
}

impl Reduction for UnitaryLift {
    fn name(&self) -> String {
        UNITARY.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        UnitaryLift::check(src)?;
        let mut types = src.types.clone();
        types.extend(src.types.iter().map(|t| t.dual()));
        Ok(Signature::new(src.spaces.clone(), GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let mut out = x.tensors.clone();
        out.extend(x.tensors.iter().map(|t| t.conj().dualize()));
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(UNITARY, src, g)?;
        Ok(g.retag(GroupTag::GL, None)?)
    }

    fn describe_lift(&self) -> String {
        "u ↦ u as an element of GL".into()
    }

    fn polynomial(&self) -> bool {
        false
    }
}
