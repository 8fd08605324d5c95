use tensor_core::{GroupTag, MixedTensor, Scalar, TensorType};

use crate::signature::Signature;
use crate::Result;

/// Generators of the invariant tensors of a group, one entry per space and kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FundamentalKind {
    /// Bilinear form `g ∈ (V_i^*)^{⊗2}` (O, Sp).
    Form(usize),
    /// Dual form `ḡ ∈ V_i^{⊗2}` (O, Sp).
    DualForm(usize),
    /// `h = Σ e_j^{⊗3}` (Sn).
    Cube(usize),
    /// `g = Σ e_j^* ⊗ e_j^*` (Sn).
    Diagonal(usize),
}

impl FundamentalKind {
    pub fn space(self) -> usize {
        match self {
            FundamentalKind::Form(i)
            | FundamentalKind::DualForm(i)
            | FundamentalKind::Cube(i)
            | FundamentalKind::Diagonal(i) => i,
        }
    }

    pub fn ttype(self, m: usize) -> TensorType {
        match self {
            FundamentalKind::Form(i) | FundamentalKind::Diagonal(i) => TensorType::unit(m, i, 0, 2),
            FundamentalKind::DualForm(i) => TensorType::unit(m, i, 2, 0),
            FundamentalKind::Cube(i) => TensorType::unit(m, i, 3, 0),
        }
    }

    /// Contravariant slots may be permuted freely (up to sign for Sp).
    pub fn contra_symmetric(self) -> bool {
        matches!(self, FundamentalKind::DualForm(_) | FundamentalKind::Cube(_))
    }

    pub fn co_symmetric(self) -> bool {
        matches!(self, FundamentalKind::Form(_) | FundamentalKind::Diagonal(_))
    }
}

/// Per space: `g_i, ḡ_i` for O/Sp, `h_i, g_i` for Sn, nothing for GL and U.
pub fn fundamental_kinds(group: GroupTag, m: usize) -> Vec<FundamentalKind> {
    let mut out = Vec::new();
    for i in 0..m {
        match group {
            GroupTag::O | GroupTag::Sp => {
                out.push(FundamentalKind::Form(i));
                out.push(FundamentalKind::DualForm(i));
            }
            GroupTag::Sn => {
                out.push(FundamentalKind::Cube(i));
                out.push(FundamentalKind::Diagonal(i));
            }
            GroupTag::GL | GroupTag::U => {}
        }
    }
    out
}

/// Tensors of [`fundamental_kinds`] with the signature's explicit forms.
pub fn fundamental_tensors(sig: &Signature) -> Result<Vec<MixedTensor>> {
    let m = sig.m();
    let sp = &sig.spaces;
    fundamental_kinds(sig.group, m)
        .into_iter()
        .map(|k| {
            let i = k.space();
            let n = sp.dim(i);
            let entries: Vec<(Vec<usize>, Scalar)> = match k {
                FundamentalKind::Form(_) => {
                    let g = &sig.forms.as_ref().unwrap()[i];
                    matrix_entries(g)
                }
                FundamentalKind::DualForm(_) => {
                    let g = sig.forms.as_ref().unwrap()[i].inverse()?;
                    matrix_entries(&g)
                }
                FundamentalKind::Cube(_) => (0..n).map(|j| (vec![j, j, j], Scalar::one())).collect(),
                FundamentalKind::Diagonal(_) => (0..n).map(|j| (vec![j, j], Scalar::one())).collect(),
            };
            Ok(MixedTensor::from_entries(sp, k.ttype(m), sig.field, entries)?)
        })
        .collect()
}

fn matrix_entries(g: &tensor_core::Matrix) -> Vec<(Vec<usize>, Scalar)> {
    let mut out = Vec::new();
    for r in 0..g.rows() {
        for c in 0..g.cols() {
            if !g.get(r, c).is_zero() {
                out.push((vec![r, c], g.get(r, c).clone()));
            }
        }
    }
    out
}
