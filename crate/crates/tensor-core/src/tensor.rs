use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::TensorError;
use crate::matrix::Matrix;
use crate::perm::Perm;
use crate::scalar::{Field, Scalar};
use crate::space::{SpaceTuple, TensorType};
use crate::Result;

/// Partial bijection `γ: P → Q` between contravariant positions `P` and covariant positions `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialBijection {
    pairs: Vec<(usize, usize)>,
}

impl PartialBijection {
    /// From 1-based `(p, γ(p))` pairs.
    pub fn new(pairs: &[(usize, usize)]) -> Result<Self> {
        if pairs.iter().any(|&(p, q)| p == 0 || q == 0) {
            return Err(TensorError::OutOfRange("positions are 1-based".into()));
        }
        PartialBijection::from_zero_based(pairs.iter().map(|&(p, q)| (p - 1, q - 1)).collect())
    }

    pub fn from_zero_based(pairs: Vec<(usize, usize)>) -> Result<Self> {
        for (i, a) in pairs.iter().enumerate() {
            for b in &pairs[i + 1..] {
                if a.0 == b.0 || a.1 == b.1 {
                    return Err(TensorError::OutOfRange(format!("not injective: {pairs:?}")));
                }
            }
        }
        Ok(PartialBijection { pairs })
    }

    /// `p ↦ p` on the first `k` positions.
    pub fn diagonal(k: usize) -> Self {
        PartialBijection { pairs: (0..k).map(|p| (p, p)).collect() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Sparse exact tensor over a tuple of spaces.
#[derive(Clone)]
pub struct MixedTensor {
    spaces: SpaceTuple,
    ttype: TensorType,
    field: Field,
    factor_dims: Vec<u64>,
    strides: Vec<u64>,
    entries: BTreeMap<u64, Scalar>,
}

impl PartialEq for MixedTensor {
    fn eq(&self, other: &Self) -> bool {
        self.spaces == other.spaces && self.ttype == other.ttype && self.entries == other.entries
    }
}

impl Eq for MixedTensor {}

fn layout(spaces: &SpaceTuple, ttype: &TensorType) -> Result<(Vec<u64>, Vec<u64>)> {
    if ttype.spaces() != spaces.len() {
        return Err(TensorError::TypeMismatch(format!("type {ttype} over {} spaces", spaces.len())));
    }
    let dims: Vec<u64> = ttype.factor_spaces().into_iter().map(|i| spaces.dim(i) as u64).collect();
    let mut strides = vec![1u64; dims.len()];
    let mut acc = 1u64;
    for f in (0..dims.len()).rev() {
        strides[f] = acc;
        acc = acc.checked_mul(dims[f]).ok_or(TensorError::IndexOverflow)?;
    }
    Ok((dims, strides))
}

impl MixedTensor {
    pub fn zero(spaces: &SpaceTuple, ttype: TensorType, field: Field) -> Result<Self> {
        let (factor_dims, strides) = layout(spaces, &ttype)?;
        Ok(MixedTensor { spaces: spaces.clone(), ttype, field, factor_dims, strides, entries: BTreeMap::new() })
    }

    /// Scalar tensor of type `(0;0)`.
    pub fn scalar(spaces: &SpaceTuple, value: Scalar) -> Self {
        let field = value.field();
        let mut t = MixedTensor::zero(spaces, TensorType::zero(spaces.len()), field).expect("scalar layout");
        t.accumulate(0, value);
        t
    }

    /// Builds a tensor from 0-based multi-indices; repeated indices are summed.
    pub fn from_entries<I>(spaces: &SpaceTuple, ttype: TensorType, field: Field, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let mut t = MixedTensor::zero(spaces, ttype, field)?;
        for (idx, v) in entries {
            let key = t.encode(&idx)?;
            t.accumulate(key, v.to_field(field)?);
        }
        Ok(t)
    }

    pub fn spaces(&self) -> &SpaceTuple {
        &self.spaces
    }

    pub fn ttype(&self) -> &TensorType {
        &self.ttype
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn order(&self) -> usize {
        self.factor_dims.len()
    }

    /// Dimension of every factor, in factor order.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.factor_dims.iter().map(|&d| d as usize).collect()
    }

    pub fn encode(&self, idx: &[usize]) -> Result<u64> {
        if idx.len() != self.factor_dims.len() {
            return Err(TensorError::OutOfRange(format!(
                "multi-index of length {} for order {}",
                idx.len(),
                self.factor_dims.len()
            )));
        }
        let mut key = 0u64;
        for (f, &i) in idx.iter().enumerate() {
            if i as u64 >= self.factor_dims[f] {
                return Err(TensorError::OutOfRange(format!("index {i} at factor {f}")));
            }
            key += i as u64 * self.strides[f];
        }
        Ok(key)
    }

    pub fn decode(&self, key: u64) -> Vec<usize> {
        self.factor_dims.iter().zip(&self.strides).map(|(&d, &s)| ((key / s) % d) as usize).collect()
    }

    fn accumulate(&mut self, key: u64, v: Scalar) {
        if v.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &v;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn with_entries(&self, ttype: TensorType, entries: impl IntoIterator<Item = (u64, Scalar)>) -> Result<Self> {
        let mut t = MixedTensor::zero(&self.spaces, ttype, self.field)?;
        for (k, v) in entries {
            t.accumulate(k, v);
        }
        Ok(t)
    }

    fn from_hash(&self, ttype: TensorType, acc: HashMap<u64, Scalar>) -> Result<Self> {
        let mut t = MixedTensor::zero(&self.spaces, ttype, self.field)?;
        t.entries = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(t)
    }

    pub fn get(&self, idx: &[usize]) -> Result<Scalar> {
        let key = self.encode(idx)?;
        Ok(self.entries.get(&key).cloned().unwrap_or_else(Scalar::zero))
    }

    /// Nonzero entries as `(0-based multi-index, value)` in key order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.entries.iter().map(|(&k, v)| (self.decode(k), v))
    }

    pub fn raw_entries(&self) -> impl Iterator<Item = (u64, &Scalar)> + '_ {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn to_field(&self, field: Field) -> Result<Self> {
        let mut t = self.clone();
        t.field = field;
        for v in t.entries.values_mut() {
            *v = v.to_field(field)?;
        }
        Ok(t)
    }

    /// Checks the spaces agree and returns the joined field.
    fn check_compatible(&self, other: &MixedTensor) -> Result<Field> {
        if self.spaces != other.spaces {
            return Err(TensorError::SpaceMismatch(self.spaces.dims().to_vec(), other.spaces.dims().to_vec()));
        }
        Ok(self.field.join(other.field))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut t = self.clone();
        t.entries = self.entries.iter().map(|(&k, v)| (k, v * s)).filter(|(_, v)| !v.is_zero()).collect();
        t
    }

    pub fn add(&self, other: &MixedTensor) -> Result<Self> {
        let field = self.check_compatible(other)?;
        if self.ttype != other.ttype {
            return Err(TensorError::TypeMismatch(format!("{} + {}", self.ttype, other.ttype)));
        }
        let mut t = self.to_field(field)?;
        for (&k, v) in &other.entries {
            t.accumulate(k, v.to_field(field)?);
        }
        Ok(t)
    }

    pub fn sub(&self, other: &MixedTensor) -> Result<Self> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn conj(&self) -> Self {
        let mut t = self.clone();
        for v in t.entries.values_mut() {
            *v = v.conj();
        }
        t
    }

    /// Same entries with every contravariant block exchanged for the covariant block of its space.
    pub fn dualize(&self) -> Self {
        let tt = &self.ttype;
        let mut src = Vec::new();
        for i in 0..tt.spaces() {
            src.extend(tt.co_offset(i)..tt.co_offset(i) + tt.co[i]);
            src.extend(tt.contra_offset(i)..tt.contra_offset(i) + tt.contra[i]);
        }
        let dual = tt.dual();
        let out = MixedTensor::zero(&self.spaces, dual, self.field).expect("dual layout");
        let mut t = out.clone();
        for (idx, v) in self.entries() {
            let new_idx: Vec<usize> = src.iter().map(|&f| idx[f]).collect();
            let key = out.encode(&new_idx).expect("in range");
            t.accumulate(key, v.clone());
        }
        t
    }

    /// Reinterprets entries in a new layout by mapping multi-indices.
    pub fn reindex<F>(&self, spaces: &SpaceTuple, ttype: TensorType, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Vec<usize>,
    {
        let mut t = MixedTensor::zero(spaces, ttype, self.field)?;
        for (idx, v) in self.entries() {
            let key = t.encode(&f(&idx))?;
            t.accumulate(key, v.clone());
        }
        Ok(t)
    }

    /// `t ⊗ s`; per space, `t`'s factors precede `s`'s factors in each block.
    pub fn tensor_product(&self, other: &MixedTensor) -> Result<Self> {
        let field = self.check_compatible(other)?;
        let tt = self.ttype.sum(&other.ttype);
        let out = MixedTensor::zero(&self.spaces, tt.clone(), field)?;
        let dest = |ty: &TensorType, shift_contra: &dyn Fn(usize) -> usize, shift_co: &dyn Fn(usize) -> usize| {
            let mut d = Vec::with_capacity(ty.total_factors());
            for i in 0..ty.spaces() {
                for p in 0..ty.contra[i] {
                    d.push(tt.contra_offset(i) + shift_contra(i) + p);
                }
                for q in 0..ty.co[i] {
                    d.push(tt.co_offset(i) + shift_co(i) + q);
                }
            }
            d
        };
        let dt = dest(&self.ttype, &|_| 0, &|_| 0);
        let ds = dest(&other.ttype, &|i| self.ttype.contra[i], &|i| self.ttype.co[i]);
        let tkeys: Vec<(u64, &Scalar)> = self
            .entries()
            .map(|(idx, v)| (idx.iter().zip(&dt).map(|(&i, &f)| i as u64 * out.strides[f]).sum(), v))
            .collect();
        let skeys: Vec<(u64, &Scalar)> = other
            .entries()
            .map(|(idx, v)| (idx.iter().zip(&ds).map(|(&i, &f)| i as u64 * out.strides[f]).sum(), v))
            .collect();
        let mut t = out;
        for (ka, a) in &tkeys {
            for (kb, b) in &skeys {
                t.entries.insert(ka + kb, (*a * *b).to_field(field)?);
            }
        }
        Ok(t)
    }

    /// `Tr[V_space]_γ`: pairs contravariant position `p` with covariant position `γ(p)` of one space.
    pub fn contract(&self, space: usize, gamma: &PartialBijection) -> Result<Self> {
        let tt = &self.ttype;
        if space >= tt.spaces() {
            return Err(TensorError::OutOfRange(format!("space {space}")));
        }
        for &(p, q) in gamma.pairs() {
            if p >= tt.contra[space] || q >= tt.co[space] {
                return Err(TensorError::OutOfRange(format!(
                    "contraction pair ({}, {}) on type {tt}",
                    p + 1,
                    q + 1
                )));
            }
        }
        let co = tt.contra_offset(space);
        let cv = tt.co_offset(space);
        let pairs: Vec<(usize, usize)> = gamma.pairs().iter().map(|&(p, q)| (co + p, cv + q)).collect();
        let mut removed = vec![false; tt.total_factors()];
        for &(a, b) in &pairs {
            removed[a] = true;
            removed[b] = true;
        }
        let mut nt = tt.clone();
        nt.contra[space] -= gamma.len();
        nt.co[space] -= gamma.len();
        let out = MixedTensor::zero(&self.spaces, nt.clone(), self.field)?;
        let keep: Vec<usize> = (0..tt.total_factors()).filter(|&f| !removed[f]).collect();
        let mut acc: HashMap<u64, Scalar> = HashMap::new();
        for (idx, v) in self.entries() {
            if pairs.iter().all(|&(a, b)| idx[a] == idx[b]) {
                let key: u64 = keep.iter().enumerate().map(|(j, &f)| idx[f] as u64 * out.strides[j]).sum();
                *acc.entry(key).or_default() += v;
            }
        }
        self.from_hash(nt, acc)
    }

    /// `(π, σ)·t` per space: `new[π(j)] = old[j]` on the contravariant block, likewise `σ` on the covariant block.
    pub fn permute_factors(&self, perms: &[(Perm, Perm)]) -> Result<Self> {
        let tt = &self.ttype;
        if perms.len() != tt.spaces() {
            return Err(TensorError::PermSize { expected: tt.spaces(), got: perms.len() });
        }
        let mut dest = vec![0usize; tt.total_factors()];
        for (i, (pi, sigma)) in perms.iter().enumerate() {
            if pi.len() != tt.contra[i] {
                return Err(TensorError::PermSize { expected: tt.contra[i], got: pi.len() });
            }
            if sigma.len() != tt.co[i] {
                return Err(TensorError::PermSize { expected: tt.co[i], got: sigma.len() });
            }
            for j in 0..tt.contra[i] {
                dest[tt.contra_offset(i) + j] = tt.contra_offset(i) + pi.apply(j);
            }
            for j in 0..tt.co[i] {
                dest[tt.co_offset(i) + j] = tt.co_offset(i) + sigma.apply(j);
            }
        }
        let strides = self.strides.clone();
        let entries: Vec<(u64, Scalar)> = self
            .entries()
            .map(|(idx, v)| (idx.iter().enumerate().map(|(j, &i)| i as u64 * strides[dest[j]]).sum(), v.clone()))
            .collect();
        self.with_entries(tt.clone(), entries)
    }

    /// Applies the matrix `m` to factor `f`: `new[.., r, ..] = Σ_c m[r][c] old[.., c, ..]`.
    pub fn apply_matrix_to_factor(&self, f: usize, m: &Matrix) -> Result<Self> {
        let d = self.factor_dims[f] as usize;
        if m.rows() != d || m.cols() != d {
            return Err(TensorError::TypeMismatch(format!("{}x{} matrix on factor of dim {d}", m.rows(), m.cols())));
        }
        let cols: Vec<Vec<(usize, Scalar)>> = (0..d).map(|c| m.column_support(c)).collect();
        let stride = self.strides[f];
        let mut acc: HashMap<u64, Scalar> = HashMap::with_capacity(self.entries.len());
        for (&k, v) in &self.entries {
            let c = ((k / stride) % d as u64) as usize;
            let base = k - c as u64 * stride;
            for (r, mv) in &cols[c] {
                *acc.entry(base + *r as u64 * stride).or_default() += &(v * mv);
            }
        }
        let mut t = self.from_hash(self.ttype.clone(), acc)?;
        if m.field() == Field::Qi {
            t.field = Field::Qi;
            for v in t.entries.values_mut() {
                *v = v.to_field(Field::Qi)?;
            }
        }
        Ok(t)
    }

    /// `t · s = Tr^{a+1..a+b}_{1..b}(t ⊗ s)` for `t: (a;b)`, `s: (b;c)` over a single space.
    pub fn compose(&self, other: &MixedTensor) -> Result<Self> {
        if self.ttype.spaces() != 1 || other.ttype.spaces() != 1 {
            return Err(TensorError::TypeMismatch("compose needs a single space".into()));
        }
        let (a, b) = (self.ttype.contra[0], self.ttype.co[0]);
        if other.ttype.contra[0] != b {
            return Err(TensorError::TypeMismatch(format!("compose {} · {}", self.ttype, other.ttype)));
        }
        let gamma = PartialBijection::from_zero_based((0..b).map(|j| (a + j, j)).collect())?;
        self.tensor_product(other)?.contract(0, &gamma)
    }

    /// Contracts contravariant slot `p` with covariant slot `π_i(p)` in every space.
    pub fn full_trace(&self, perms: &[Perm]) -> Result<Scalar> {
        let tt = &self.ttype;
        if !tt.is_balanced() {
            return Err(TensorError::Unbalanced(tt.to_string()));
        }
        if perms.len() != tt.spaces() {
            return Err(TensorError::PermSize { expected: tt.spaces(), got: perms.len() });
        }
        let mut pairs = Vec::new();
        for (i, pi) in perms.iter().enumerate() {
            if pi.len() != tt.contra[i] {
                return Err(TensorError::PermSize { expected: tt.contra[i], got: pi.len() });
            }
            for p in 0..pi.len() {
                pairs.push((tt.contra_offset(i) + p, tt.co_offset(i) + pi.apply(p)));
            }
        }
        let mut sum = Scalar::zero().to_field(self.field)?;
        for (idx, v) in self.entries() {
            if pairs.iter().all(|&(a, b)| idx[a] == idx[b]) {
                sum += v;
            }
        }
        Ok(sum)
    }

    /// Converts all covariant factors to contravariant ones through `v^a = Σ_b w_b (G^{-1})_{ba}`.
    pub fn lower_indices(&self, forms: &[Matrix]) -> Result<Self> {
        let tt = &self.ttype;
        if forms.len() != tt.spaces() {
            return Err(TensorError::PermSize { expected: tt.spaces(), got: forms.len() });
        }
        let mut t = self.clone();
        for (i, g) in forms.iter().enumerate() {
            if tt.co[i] == 0 {
                continue;
            }
            let m = g.inverse()?.transpose();
            for q in 0..tt.co[i] {
                t = t.apply_matrix_to_factor(tt.co_offset(i) + q, &m)?;
            }
        }
        let nt = TensorType {
            contra: tt.contra.iter().zip(&tt.co).map(|(a, b)| a + b).collect(),
            co: vec![0; tt.spaces()],
        };
        t.ttype = nt;
        Ok(t)
    }

    /// Inverse of [`lower_indices`](Self::lower_indices): the last `counts[i]` contravariant factors
    /// of space `i` become covariant via `w_b = Σ_a v^a G_{ab}`.
    pub fn raise_indices(&self, forms: &[Matrix], counts: &[usize]) -> Result<Self> {
        let tt = &self.ttype;
        if forms.len() != tt.spaces() || counts.len() != tt.spaces() {
            return Err(TensorError::PermSize { expected: tt.spaces(), got: forms.len().min(counts.len()) });
        }
        for i in 0..tt.spaces() {
            if tt.co[i] != 0 || counts[i] > tt.contra[i] {
                return Err(TensorError::TypeMismatch(format!("cannot raise {} slots of {tt}", counts[i])));
            }
        }
        let mut t = self.clone();
        for (i, g) in forms.iter().enumerate() {
            let m = g.transpose();
            for q in 0..counts[i] {
                t = t.apply_matrix_to_factor(tt.contra_offset(i) + tt.contra[i] - counts[i] + q, &m)?;
            }
        }
        t.ttype = TensorType {
            contra: tt.contra.iter().zip(counts).map(|(a, c)| a - c).collect(),
            co: counts.to_vec(),
        };
        Ok(t)
    }

    /// `Id ∈ V_i ⊗ V_i^*`.
    pub fn identity(spaces: &SpaceTuple, i: usize) -> Result<Self> {
        if i >= spaces.len() {
            return Err(TensorError::OutOfRange(format!("space {i}")));
        }
        MixedTensor::from_entries(
            spaces,
            TensorType::unit(spaces.len(), i, 1, 1),
            Field::Q,
            (0..spaces.dim(i)).map(|j| (vec![j, j], Scalar::one())),
        )
    }

    /// `Id^{⊗k}` over space `i`.
    pub fn identity_power(spaces: &SpaceTuple, i: usize, k: usize) -> Result<Self> {
        MixedTensor::permutation(spaces, i, &Perm::identity(k))
    }

    /// `P_π = Tr^{d+1..2d}_{π(1)..π(d)}(Id^{⊗2d})`: entry 1 iff `i_{π(j)} = k_j` for all `j`.
    pub fn permutation(spaces: &SpaceTuple, i: usize, pi: &Perm) -> Result<Self> {
        if i >= spaces.len() {
            return Err(TensorError::OutOfRange(format!("space {i}")));
        }
        let d = pi.len();
        let n = spaces.dim(i);
        let mut t = MixedTensor::zero(spaces, TensorType::unit(spaces.len(), i, d, d), Field::Q)?;
        let total = (n as u64).checked_pow(d as u32).ok_or(TensorError::IndexOverflow)?;
        let mut k = vec![0usize; d];
        for _ in 0..total {
            let mut idx = vec![0usize; 2 * d];
            for j in 0..d {
                idx[pi.apply(j)] = k[j];
                idx[d + j] = k[j];
            }
            let key = t.encode(&idx)?;
            t.entries.insert(key, Scalar::one());
            for j in (0..d).rev() {
                k[j] += 1;
                if k[j] < n {
                    break;
                }
                k[j] = 0;
            }
        }
        Ok(t)
    }
}

impl fmt::Debug for MixedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MixedTensor{:?} {} {{", self.spaces.dims(), self.ttype)?;
        for (n, (idx, v)) in self.entries().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{idx:?}: {v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize) -> SpaceTuple {
        SpaceTuple::single(n).unwrap()
    }

    fn matrix(n: usize, rows: &[&[i64]]) -> MixedTensor {
        let mut e = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                e.push((vec![r, c], Scalar::from_int(v)));
            }
        }
        MixedTensor::from_entries(&sp(n), TensorType::single(1, 1), Field::Q, e).unwrap()
    }

    #[test]
    fn elementary_product() {
        let e1 = MixedTensor::from_entries(&sp(2), TensorType::single(1, 0), Field::Q, [(vec![0], Scalar::one())])
            .unwrap();
        let f2 = MixedTensor::from_entries(&sp(2), TensorType::single(0, 1), Field::Q, [(vec![1], Scalar::one())])
            .unwrap();
        let p = e1.tensor_product(&f2).unwrap();
        assert_eq!(p.nnz(), 1);
        assert!(p.get(&[0, 1]).unwrap().is_one());
    }

    #[test]
    fn identity_squared_has_four_entries() {
        let id = MixedTensor::identity(&sp(2), 0).unwrap();
        let p = id.tensor_product(&id).unwrap();
        assert_eq!(p.nnz(), 4);
        assert!(p.get(&[0, 1, 0, 1]).unwrap().is_one());
        assert!(p.get(&[0, 1, 1, 0]).unwrap().is_zero());
    }

    #[test]
    fn trace_of_identity_and_matrix() {
        let id = MixedTensor::identity(&sp(3), 0).unwrap();
        let s = id.contract(0, &PartialBijection::new(&[(1, 1)]).unwrap()).unwrap();
        assert_eq!(s.get(&[]).unwrap(), Scalar::from_int(3));
        let m = matrix(2, &[&[1, 2], &[3, 4]]);
        let s = m.contract(0, &PartialBijection::new(&[(1, 1)]).unwrap()).unwrap();
        assert_eq!(s.get(&[]).unwrap(), Scalar::from_int(5));
    }

    #[test]
    fn compose_is_matrix_product() {
        let a = matrix(2, &[&[1, 2], &[3, 4]]);
        let b = matrix(2, &[&[0, 1], &[5, -1]]);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab, matrix(2, &[&[10, -1], &[20, -1]]));
    }

    #[test]
    fn swap_permutation_tensor() {
        let p = MixedTensor::permutation(&sp(2), 0, &Perm::transposition(2, 0, 1)).unwrap();
        assert_eq!(p.nnz(), 4);
        assert!(p.get(&[0, 1, 1, 0]).unwrap().is_one());
        let id = MixedTensor::permutation(&sp(2), 0, &Perm::identity(2)).unwrap();
        let i1 = MixedTensor::identity(&sp(2), 0).unwrap();
        assert_eq!(id, i1.tensor_product(&i1).unwrap());
    }

    #[test]
    fn full_trace_examples() {
        let a = matrix(2, &[&[1, 2], &[3, 4]]);
        let b = matrix(2, &[&[0, 1], &[5, -1]]);
        let ab = a.tensor_product(&b).unwrap();
        let tr = ab.full_trace(&[Perm::transposition(2, 0, 1)]).unwrap();
        assert_eq!(tr, Scalar::from_int(10 - 1));
        let unit = MixedTensor::scalar(&sp(2), Scalar::one());
        assert!(unit.full_trace(&[Perm::identity(0)]).unwrap().is_one());
    }

    #[test]
    fn symplectic_lowering() {
        let j = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
        let e1 = MixedTensor::from_entries(&sp(2), TensorType::single(0, 1), Field::Q, [(vec![0], Scalar::one())])
            .unwrap();
        let v = e1.lower_indices(std::slice::from_ref(&j)).unwrap();
        assert_eq!(v.ttype(), &TensorType::single(1, 0));
        assert_eq!(v.get(&[1]).unwrap(), Scalar::from_int(-1));
        assert_eq!(v.nnz(), 1);
        assert_eq!(v.raise_indices(&[j], &[1]).unwrap(), e1);
    }

    #[test]
    fn overflow_is_reported() {
        let big = SpaceTuple::single(1 << 20).unwrap();
        assert_eq!(MixedTensor::zero(&big, TensorType::single(4, 0), Field::Q), Err(TensorError::IndexOverflow));
    }
}
