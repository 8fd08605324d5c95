use invariant_engine::{Network, NodeKind, Signature};
use tensor_core::{GroupElement, GroupTag, Matrix, MixedTensor, Scalar, SpaceTuple, TensorType};

use crate::rewrite::Rewrite;
use crate::{ReductionError, Result};

/// Mixed-radix index with the first digit most significant.
pub(crate) fn radix(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

pub(crate) fn unradix(mut v: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = v % dims[k];
        v /= dims[k];
    }
    out
}

/// `[[0, I], [I, 0]]`, or `[[0, I], [−I, 0]]` when `skew`.
pub fn hyperbolic_form(n: usize, skew: bool) -> Matrix {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m.set(j, n + j, Scalar::one());
        m.set(n + j, j, if skew { Scalar::from_int(-1) } else { Scalar::one() });
    }
    m
}

/// `g ⊗ g ⊗ g ⊗ g` as a form on `X^{⊗4}`.
pub fn cube_form(g: &Matrix) -> Matrix {
    g.kron(g).kron(g).kron(g)
}

pub(crate) fn gl_element(mats: Vec<Matrix>) -> Result<GroupElement> {
    Ok(GroupElement::new(GroupTag::GL, mats, None)?)
}

pub(crate) fn require_group(stage: &str, sig: &Signature, allowed: &[GroupTag]) -> Result<()> {
    if allowed.contains(&sig.group) {
        Ok(())
    } else {
        Err(ReductionError::schema(stage, format!("group {} not accepted", sig.group)))
    }
}

pub(crate) fn require_element(stage: &str, sig: &Signature, g: &GroupElement) -> Result<()> {
    if g.tag() != sig.group || g.dims() != sig.dims() {
        return Err(ReductionError::schema(stage, format!("group element {g:?} does not act on {sig}")));
    }
    Ok(())
}

pub(crate) fn matrix_tensor(sp: &SpaceTuple, ttype: TensorType, m: &Matrix) -> Result<MixedTensor> {
    let mut entries = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m.get(r, c).is_zero() {
                entries.push((vec![r, c], m.get(r, c).clone()));
            }
        }
    }
    Ok(MixedTensor::from_entries(sp, ttype, m.field(), entries)?)
}

/// Adds a node of `kind` whose slots stand in for the same slots of source node `u`.
pub(crate) fn copy_node(rw: &mut Rewrite, src: &Network, u: usize, kind: NodeKind) -> usize {
    let t = rw.net.add(kind);
    let ty = src.node_type(u);
    for i in 0..ty.spaces() {
        for p in 0..ty.contra[i] {
            rw.contra(i, (u, p), i, (t, p));
        }
        for q in 0..ty.co[i] {
            rw.co(i, (u, q), i, (t, q));
        }
    }
    t
}
