use std::fmt;

use crate::error::TensorError;
use crate::matrix::Matrix;
use crate::perm::Perm;
use crate::tensor::MixedTensor;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTag {
    GL,
    O,
    Sp,
    Sn,
    U,
}

impl GroupTag {
    pub fn needs_forms(self) -> bool {
        matches!(self, GroupTag::O | GroupTag::Sp)
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupTag::GL => "GL",
            GroupTag::O => "O",
            GroupTag::Sp => "Sp",
            GroupTag::Sn => "Sn",
            GroupTag::U => "U",
        }
    }

    pub fn parse(s: &str) -> Option<GroupTag> {
        Some(match s {
            "GL" => GroupTag::GL,
            "O" => GroupTag::O,
            "Sp" => GroupTag::Sp,
            "Sn" => GroupTag::Sn,
            "U" => GroupTag::U,
            _ => return None,
        })
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Element of a product of per-space matrix groups.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupElement {
    tag: GroupTag,
    mats: Vec<Matrix>,
    inv: Vec<Matrix>,
    forms: Option<Vec<Matrix>>,
}

fn is_permutation_matrix(m: &Matrix) -> bool {
    let n = m.rows();
    let ok_entries = (0..n).all(|r| (0..n).all(|c| m.get(r, c).is_zero() || m.get(r, c).is_one()));
    ok_entries
        && (0..n).all(|r| (0..n).filter(|&c| m.get(r, c).is_one()).count() == 1)
        && (0..n).all(|c| (0..n).filter(|&r| m.get(r, c).is_one()).count() == 1)
}

impl GroupElement {
    /// Validates membership of every matrix in the tagged group.
    pub fn new(tag: GroupTag, mats: Vec<Matrix>, forms: Option<Vec<Matrix>>) -> Result<Self> {
        if mats.is_empty() {
            return Err(TensorError::InvalidGroupElement("no spaces".into()));
        }
        if tag.needs_forms() {
            let fs = forms
                .as_ref()
                .ok_or_else(|| TensorError::InvalidGroupElement(format!("{tag} element without forms")))?;
            if fs.len() != mats.len() {
                return Err(TensorError::InvalidGroupElement("form count".into()));
            }
        }
        let mut inv = Vec::with_capacity(mats.len());
        for (i, g) in mats.iter().enumerate() {
            if !g.is_square() {
                return Err(TensorError::InvalidGroupElement(format!("non-square matrix on space {i}")));
            }
            let gi = g.inverse().map_err(|_| TensorError::Singular)?;
            match tag {
                GroupTag::GL => {}
                GroupTag::O | GroupTag::Sp => {
                    let form = &forms.as_ref().unwrap()[i];
                    if g.transpose().mul(form)?.mul(g)? != *form {
                        return Err(TensorError::InvalidGroupElement(format!("{tag}: form not preserved on space {i}")));
                    }
                }
                GroupTag::Sn => {
                    if !is_permutation_matrix(g) {
                        return Err(TensorError::InvalidGroupElement(format!("not a permutation matrix on space {i}")));
                    }
                }
                GroupTag::U => {
                    if !g.conj_transpose().mul(g)?.is_identity() {
                        return Err(TensorError::InvalidGroupElement(format!("not unitary on space {i}")));
                    }
                }
            }
            inv.push(gi);
        }
        Ok(GroupElement { tag, mats, inv, forms })
    }

    pub fn identity(tag: GroupTag, dims: &[usize], forms: Option<Vec<Matrix>>) -> Result<Self> {
        GroupElement::new(tag, dims.iter().map(|&n| Matrix::identity(n)).collect(), forms)
    }

    /// `S_n` element with `P e_j = e_{σ(j)}` per space.
    pub fn from_permutations(perms: &[Perm]) -> Result<Self> {
        GroupElement::new(GroupTag::Sn, perms.iter().map(Matrix::permutation).collect(), None)
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn inverse_matrices(&self) -> &[Matrix] {
        &self.inv
    }

    pub fn forms(&self) -> Option<&[Matrix]> {
        self.forms.as_deref()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.mats.iter().map(Matrix::rows).collect()
    }

    /// The permutation of the `Sn` matrix on space `i`.
    pub fn permutation(&self, i: usize) -> Option<Perm> {
        if self.tag != GroupTag::Sn {
            return None;
        }
        let m = &self.mats[i];
        let n = m.rows();
        Perm::new((0..n).map(|c| (0..n).find(|&r| m.get(r, c).is_one()).unwrap()).collect()).ok()
    }

    /// Same matrices viewed in another group; validated again.
    pub fn retag(&self, tag: GroupTag, forms: Option<Vec<Matrix>>) -> Result<Self> {
        GroupElement::new(tag, self.mats.clone(), forms)
    }

    /// Product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Result<Self> {
        if self.tag != other.tag || self.dims() != other.dims() {
            return Err(TensorError::InvalidGroupElement("composing incompatible elements".into()));
        }
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.mul(b)).collect::<Result<Vec<_>>>()?;
        let inv = other.inv.iter().zip(&self.inv).map(|(a, b)| a.mul(b)).collect::<Result<Vec<_>>>()?;
        Ok(GroupElement { tag: self.tag, mats, inv, forms: self.forms.clone() })
    }

    pub fn inverse(&self) -> Self {
        GroupElement { tag: self.tag, mats: self.inv.clone(), inv: self.mats.clone(), forms: self.forms.clone() }
    }

    /// `g·t`: contravariant factors by `g_i`, covariant factors by `g_i^{-T}`.
    pub fn apply(&self, t: &MixedTensor) -> Result<MixedTensor> {
        if t.spaces().dims() != self.dims().as_slice() {
            return Err(TensorError::SpaceMismatch(self.dims(), t.spaces().dims().to_vec()));
        }
        let tt = t.ttype().clone();
        let mut out = t.clone();
        for i in 0..tt.spaces() {
            if tt.contra[i] + tt.co[i] == 0 {
                continue;
            }
            let g = &self.mats[i];
            for p in 0..tt.contra[i] {
                out = out.apply_matrix_to_factor(tt.contra_offset(i) + p, g)?;
            }
            if tt.co[i] > 0 {
                let git = self.inv[i].transpose();
                for q in 0..tt.co[i] {
                    out = out.apply_matrix_to_factor(tt.co_offset(i) + q, &git)?;
                }
            }
        }
        Ok(out)
    }

    /// `g ↦ g_1 ⊕ … ⊕ g_m` as a one-space element.
    pub fn direct_sum_matrix(&self) -> Matrix {
        let mut it = self.mats.iter();
        let first = it.next().unwrap().clone();
        it.fold(first, |acc, m| acc.direct_sum(m))
    }

    /// `g_1 ⊗ … ⊗ g_m` (Kronecker, first space most significant).
    pub fn kron_matrix(&self) -> Matrix {
        let mut it = self.mats.iter();
        let first = it.next().unwrap().clone();
        it.fold(first, |acc, m| acc.kron(m))
    }

    pub fn scalar_entries_real(&self) -> bool {
        self.mats.iter().all(Matrix::is_real)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.tag, self.mats)
    }
}
