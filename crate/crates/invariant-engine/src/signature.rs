use std::fmt;

use tensor_core::{Field, GroupElement, GroupTag, Matrix, MixedTensor, SpaceTuple, TensorType};

use crate::error::InvariantError;
use crate::Result;

/// `⊕_k V^{(a_k; b_k)}` under a tagged group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub spaces: SpaceTuple,
    pub group: GroupTag,
    pub field: Field,
    pub types: Vec<TensorType>,
    pub forms: Option<Vec<Matrix>>,
}

impl Signature {
    pub fn new(
        spaces: SpaceTuple,
        group: GroupTag,
        field: Field,
        types: Vec<TensorType>,
        forms: Option<Vec<Matrix>>,
    ) -> Result<Self> {
        let m = spaces.len();
        if let Some(t) = types.iter().find(|t| t.spaces() != m) {
            return Err(InvariantError::InvalidSignature(format!("type {t} over {m} spaces")));
        }
        if group.needs_forms() {
            let fs = forms
                .as_ref()
                .ok_or_else(|| InvariantError::InvalidSignature(format!("{group} requires forms")))?;
            if fs.len() != m {
                return Err(InvariantError::InvalidSignature("one form per space".into()));
            }
            for (i, g) in fs.iter().enumerate() {
                let n = spaces.dim(i);
                if g.rows() != n || g.cols() != n {
                    return Err(InvariantError::InvalidSignature(format!("form {i} is not {n}x{n}")));
                }
                if g.det()?.is_zero() {
                    return Err(InvariantError::InvalidSignature(format!("form {i} is degenerate")));
                }
                let gt = g.transpose();
                let ok = match group {
                    GroupTag::O => gt == *g,
                    _ => gt == g.scale(&tensor_core::Scalar::from_int(-1)),
                };
                if !ok {
                    return Err(InvariantError::InvalidSignature(format!("form {i} has the wrong symmetry")));
                }
            }
            if group == GroupTag::Sp && spaces.dims().iter().any(|n| n % 2 == 1) {
                return Err(InvariantError::InvalidSignature("Sp needs even dimensions".into()));
            }
        } else if forms.is_some() {
            return Err(InvariantError::InvalidSignature(format!("{group} takes no forms")));
        }
        if group == GroupTag::U && field != Field::Qi {
            return Err(InvariantError::InvalidSignature("U needs field Qi".into()));
        }
        Ok(Signature { spaces, group, field, types, forms })
    }

    pub fn dims(&self) -> &[usize] {
        self.spaces.dims()
    }

    pub fn m(&self) -> usize {
        self.spaces.len()
    }

    pub fn p(&self) -> usize {
        self.types.len()
    }

    pub fn with_types(&self, types: Vec<TensorType>) -> Result<Self> {
        Signature::new(self.spaces.clone(), self.group, self.field, types, self.forms.clone())
    }

    /// Identity element of the signature's group.
    pub fn identity_element(&self) -> Result<GroupElement> {
        Ok(GroupElement::identity(self.group, self.dims(), self.forms.clone())?)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let types: Vec<String> = self.types.iter().map(|t| t.to_string()).collect();
        write!(f, "{} dims {:?} [{}]", self.group, self.dims(), types.join(", "))
    }
}

/// One tensor per summand of a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub signature: Signature,
    pub tensors: Vec<MixedTensor>,
}

impl Instance {
    pub fn new(signature: Signature, tensors: Vec<MixedTensor>) -> Result<Self> {
        if tensors.len() != signature.p() {
            return Err(InvariantError::SignatureMismatch(format!(
                "{} tensors for {} summands",
                tensors.len(),
                signature.p()
            )));
        }
        let mut out = Vec::with_capacity(tensors.len());
        for (k, (t, ty)) in tensors.into_iter().zip(&signature.types).enumerate() {
            if t.ttype() != ty || t.spaces() != &signature.spaces {
                return Err(InvariantError::SignatureMismatch(format!(
                    "summand {k}: tensor of type {} where {ty} is expected",
                    t.ttype()
                )));
            }
            out.push(t.to_field(signature.field)?);
        }
        Ok(Instance { signature, tensors: out })
    }

    pub fn zero(signature: Signature) -> Result<Self> {
        let tensors = signature
            .types
            .iter()
            .map(|t| MixedTensor::zero(&signature.spaces, t.clone(), signature.field))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Instance::new(signature, tensors)
    }

    /// `g·x` summand by summand.
    pub fn apply_group(&self, g: &GroupElement) -> Result<Instance> {
        let tensors = self.tensors.iter().map(|t| g.apply(t)).collect::<std::result::Result<Vec<_>, _>>()?;
        Instance::new(self.signature.clone(), tensors)
    }

    /// Componentwise `a·x + b·y`.
    pub fn combine(&self, a: &tensor_core::Scalar, other: &Instance, b: &tensor_core::Scalar) -> Result<Instance> {
        if self.signature != other.signature {
            return Err(InvariantError::SignatureMismatch("combining different signatures".into()));
        }
        let tensors = self
            .tensors
            .iter()
            .zip(&other.tensors)
            .map(|(x, y)| x.scale(a).add(&y.scale(b)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Instance::new(self.signature.clone(), tensors)
    }
}
