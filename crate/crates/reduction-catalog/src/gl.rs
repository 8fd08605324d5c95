use std::collections::VecDeque;

use cone_hilbert::{balance_cone, hilbert_basis, HilbertBasis};
use invariant_engine::{ContractionInvariant, Instance, Network, NodeKind, Signature, Slot};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use tensor_core::{GroupElement, GroupTag, Matrix, MixedTensor, Perm, Scalar, SpaceTuple, TensorType};

use crate::rewrite::{finish_pullback, pow_dims, Rewrite};
use crate::util::{copy_node, gl_element, radix, require_element, require_group, unradix};
use crate::{Pullback, Reduction, ReductionError, Result};

fn one() -> BigRational {
    BigRational::one()
}

fn sum_type(types: &[TensorType], h: &[u64], m: usize) -> TensorType {
    let mut t = TensorType::zero(m);
    for (ty, &c) in types.iter().zip(h) {
        for _ in 0..c {
            t = t.sum(ty);
        }
    }
    t
}

fn all_balanced(stage: &str, sig: &Signature) -> Result<()> {
    match sig.types.iter().find(|t| !t.is_balanced()) {
        Some(t) => Err(ReductionError::schema(stage, format!("summand {t} is not balanced"))),
        None => Ok(()),
    }
}

fn single_space(stage: &str, sig: &Signature) -> Result<usize> {
    if sig.m() != 1 {
        return Err(ReductionError::schema(stage, format!("expected one space, found {}", sig.m())));
    }
    Ok(sig.dims()[0])
}

/// Common `c` of summands `(c;c)` over one space.
fn uniform_order(stage: &str, sig: &Signature) -> Result<usize> {
    single_space(stage, sig)?;
    all_balanced(stage, sig)?;
    let c = sig.types.first().map(|t| t.contra[0]).ok_or_else(|| ReductionError::schema(stage, "no summands"))?;
    if sig.types.iter().any(|t| t.contra[0] != c) {
        return Err(ReductionError::schema(stage, "summands of different orders"));
    }
    Ok(c)
}

/// `⊗_i Id_i^{⊗k_i}`.
fn identity_pad(sp: &SpaceTuple, k: &[usize]) -> Result<MixedTensor> {
    let mut t = MixedTensor::scalar(sp, Scalar::one());
    for (i, &c) in k.iter().enumerate() {
        if c > 0 {
            t = t.tensor_product(&MixedTensor::identity_power(sp, i, c)?)?;
        }
    }
    Ok(t)
}

const BALANCE: &str = "reduce_balance";

/// Hilbert-basis products of the summands.
pub struct Balance;

impl Balance {
    pub fn basis(src: &Signature) -> Result<HilbertBasis> {
        Ok(hilbert_basis(&balance_cone(&src.types)?)?)
    }
}

impl Reduction for Balance {
    fn name(&self) -> String {
        BALANCE.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        require_group(BALANCE, src, &[GroupTag::GL])?;
        let basis = Balance::basis(src)?;
        let types = basis.vectors.iter().map(|h| sum_type(&src.types, h, src.m())).collect();
        Ok(src.with_types(types)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let basis = Balance::basis(&x.signature)?;
        let mut out = Vec::with_capacity(basis.len());
        for h in &basis.vectors {
            let mut y = MixedTensor::scalar(&x.signature.spaces, Scalar::one());
            for (t, &c) in x.tensors.iter().zip(h) {
                for _ in 0..c {
                    y = y.tensor_product(t)?;
                }
            }
            out.push(y);
        }
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(BALANCE, src, g)?;
        Ok(g.clone())
    }

    fn describe_lift(&self) -> String {
        "g ↦ g".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let tgt = self.target_signature(src)?;
        let basis = Balance::basis(src)?;
        let d: Vec<u64> = g.degrees.iter().map(|&v| v as u64).collect();
        let coef = basis
            .decompose(&d)
            .ok_or_else(|| ReductionError::schema(BALANCE, "degree vector outside the balance cone"))?;
        let snet = Network::from_invariant(src, g)?;
        let mut queues: Vec<VecDeque<usize>> = vec![VecDeque::new(); src.p()];
        for u in snet.live_nodes() {
            if let Some(NodeKind::Summand(k)) = snet.kind(u) {
                queues[k].push_back(u);
            }
        }
        let m = src.m();
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for (l, h) in basis.vectors.iter().enumerate() {
            for _ in 0..coef[l] {
                let t = rw.net.add(NodeKind::Summand(l));
                let (mut oc, mut oo) = (vec![0; m], vec![0; m]);
                for (k, &c) in h.iter().enumerate() {
                    let ty = &src.types[k];
                    for _ in 0..c {
                        let u = queues[k].pop_front().expect("decomposition matches degrees");
                        for i in 0..m {
                            for p in 0..ty.contra[i] {
                                rw.contra(i, (u, p), i, (t, oc[i] + p));
                            }
                            for q in 0..ty.co[i] {
                                rw.co(i, (u, q), i, (t, oo[i] + q));
                            }
                            oc[i] += ty.contra[i];
                            oo[i] += ty.co[i];
                        }
                    }
                }
            }
        }
        let net = rw.finish(&snet)?;
        finish_pullback(&net, tgt.dims(), 0, one())
    }
}

const PAD: &str = "reduce_pad";

#[derive(Debug, Clone)]
enum PadTarget {
    Common,
    Uniform(TensorType),
    Types(Vec<TensorType>),
}

/// `x_k ↦ x_k ⊗ Id^{⊗…}`, extra summands filled with identity powers.
#[derive(Debug, Clone)]
pub struct Pad {
    target: PadTarget,
}

impl Pad {
    /// Every summand to the componentwise maximum.
    pub fn common() -> Self {
        Pad { target: PadTarget::Common }
    }

    /// Every summand to `t`.
    pub fn uniform(t: TensorType) -> Self {
        Pad { target: PadTarget::Uniform(t) }
    }

    pub fn to(types: Vec<TensorType>) -> Self {
        Pad { target: PadTarget::Types(types) }
    }

    fn targets(&self, src: &Signature) -> Result<Vec<TensorType>> {
        all_balanced(PAD, src)?;
        let m = src.m();
        let ts = match &self.target {
            PadTarget::Common => {
                let c: Vec<usize> = (0..m).map(|i| src.types.iter().map(|t| t.contra[i]).max().unwrap_or(0)).collect();
                vec![TensorType { contra: c.clone(), co: c }; src.p()]
            }
            PadTarget::Uniform(t) => vec![t.clone(); src.p()],
            PadTarget::Types(ts) => ts.clone(),
        };
        if ts.len() < src.p() {
            return Err(ReductionError::schema(PAD, format!("{} target types for {} summands", ts.len(), src.p())));
        }
        for (k, t) in ts.iter().enumerate() {
            if t.spaces() != m || !t.is_balanced() {
                return Err(ReductionError::schema(PAD, format!("target type {t} is not balanced over {m} spaces")));
            }
            if let Some(s) = src.types.get(k) {
                if (0..m).any(|i| s.contra[i] > t.contra[i]) {
                    return Err(ReductionError::schema(PAD, format!("target {t} does not dominate {s}")));
                }
            }
        }
        Ok(ts)
    }
}

impl Reduction for Pad {
    fn name(&self) -> String {
        PAD.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        Ok(src.with_types(self.targets(src)?)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let ts = self.targets(&x.signature)?;
        let tgt = x.signature.with_types(ts.clone())?;
        let sp = &x.signature.spaces;
        let mut out = Vec::with_capacity(ts.len());
        for (k, t) in ts.iter().enumerate() {
            out.push(match x.tensors.get(k) {
                Some(xk) => {
                    let extra: Vec<usize> = (0..sp.len()).map(|i| t.contra[i] - xk.ttype().contra[i]).collect();
                    xk.tensor_product(&identity_pad(sp, &extra)?)?
                }
                None => identity_pad(sp, &t.contra)?,
            });
        }
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(PAD, src, g)?;
        Ok(g.clone())
    }

    fn describe_lift(&self) -> String {
        "g ↦ g".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn injective_linear(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let ts = self.targets(src)?;
        let tgt = src.with_types(ts.clone())?;
        let snet = Network::from_invariant(src, g)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        let mut loops = vec![0usize; src.m()];
        for u in snet.live_nodes() {
            let kind = snet.kind(u).expect("live");
            let t = copy_node(&mut rw, &snet, u, kind);
            if let NodeKind::Summand(k) = kind {
                for i in 0..src.m() {
                    for j in src.types[k].contra[i]..ts[k].contra[i] {
                        rw.net.wire(i, (t, j), (t, j))?;
                        loops[i] += 1;
                    }
                }
            }
        }
        let net = rw.finish(&snet)?;
        let c = loops.iter().sum::<usize>() as u32;
        finish_pullback(&net, tgt.dims(), c, pow_dims(tgt.dims(), &loops))
    }
}

const MERGE: &str = "reduce_merge_spaces";

/// `W = V_1 ⊕ … ⊕ V_m` with block injections.
pub struct MergeSpaces;

impl Reduction for MergeSpaces {
    fn name(&self) -> String {
        MERGE.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        require_group(MERGE, src, &[GroupTag::GL])?;
        let n: usize = src.dims().iter().sum();
        let types = src
            .types
            .iter()
            .map(|t| TensorType::single(t.contra.iter().sum(), t.co.iter().sum()))
            .collect();
        Ok(Signature::new(SpaceTuple::single(n)?, GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let dims = x.signature.dims();
        let base: Vec<usize> = (0..dims.len()).map(|i| dims[..i].iter().sum()).collect();
        let mut out = Vec::with_capacity(x.tensors.len());
        for (t, ty) in x.tensors.iter().zip(&tgt.types) {
            let st = t.ttype().clone();
            out.push(t.reindex(&tgt.spaces, ty.clone(), |idx| {
                let (mut contra, mut co) = (Vec::new(), Vec::new());
                let mut pos = 0;
                for i in 0..st.spaces() {
                    for _ in 0..st.contra[i] {
                        contra.push(idx[pos] + base[i]);
                        pos += 1;
                    }
                    for _ in 0..st.co[i] {
                        co.push(idx[pos] + base[i]);
                        pos += 1;
                    }
                }
                contra.extend(co);
                contra
            })?);
        }
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(MERGE, src, g)?;
        gl_element(vec![g.direct_sum_matrix()])
    }

    fn describe_lift(&self) -> String {
        "(g_1, …, g_m) ↦ g_1 ⊕ … ⊕ g_m".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let tgt = self.target_signature(src)?;
        let snet = Network::from_invariant(src, g)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for u in snet.live_nodes() {
            let kind = snet.kind(u).expect("live");
            let t = rw.net.add(kind);
            let ty = snet.node_type(u);
            let (mut oc, mut oo) = (0, 0);
            for i in 0..src.m() {
                for p in 0..ty.contra[i] {
                    rw.contra(i, (u, p), 0, (t, oc + p));
                }
                for q in 0..ty.co[i] {
                    rw.co(i, (u, q), 0, (t, oo + q));
                }
                oc += ty.contra[i];
                oo += ty.co[i];
            }
        }
        let net = rw.finish(&snet)?;
        finish_pullback(&net, tgt.dims(), 0, one())
    }
}

const SPLIT: &str = "reduce_split_spaces";

/// Spreads the factors of a single space over `m` copies, joined by identity connectors.
#[derive(Debug, Clone)]
pub struct SplitSpaces {
    explicit: Option<(usize, Vec<(Vec<usize>, Vec<usize>)>)>,
}

type Partition = Vec<(Vec<usize>, Vec<usize>)>;

impl SplitSpaces {
    /// One contravariant and one covariant factor per target space.
    pub fn all_ones() -> Self {
        SplitSpaces { explicit: None }
    }

    /// Summand `k` sends `partition[k].0[s]` contravariant and `partition[k].1[s]` covariant factors to space `s`.
    pub fn new(m: usize, partition: Partition) -> Self {
        SplitSpaces { explicit: Some((m, partition)) }
    }

    fn resolve(&self, src: &Signature) -> Result<(usize, Partition)> {
        require_group(SPLIT, src, &[GroupTag::GL])?;
        single_space(SPLIT, src)?;
        let (m, part) = match &self.explicit {
            Some((m, part)) => (*m, part.clone()),
            None => {
                let c = uniform_order(SPLIT, src)?;
                (c, vec![(vec![1; c], vec![1; c]); src.p()])
            }
        };
        if m == 0 || part.len() != src.p() {
            return Err(ReductionError::schema(SPLIT, "invalid partition"));
        }
        for ((a, b), t) in part.iter().zip(&src.types) {
            if a.len() != m || b.len() != m || a.iter().sum::<usize>() != t.contra[0] || b.iter().sum::<usize>() != t.co[0] {
                return Err(ReductionError::schema(SPLIT, format!("invalid partition of {t}")));
            }
        }
        Ok((m, part))
    }
}

impl Reduction for SplitSpaces {
    fn name(&self) -> String {
        SPLIT.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        let (m, part) = self.resolve(src)?;
        let n = src.dims()[0];
        let mut types: Vec<TensorType> = part.iter().map(|(a, b)| TensorType { contra: a.clone(), co: b.clone() }).collect();
        for s in 1..m {
            let (mut f, mut g) = (TensorType::zero(m), TensorType::zero(m));
            f.contra[s] = 1;
            f.co[0] = 1;
            g.contra[0] = 1;
            g.co[s] = 1;
            types.push(f);
            types.push(g);
        }
        Ok(Signature::new(SpaceTuple::new(vec![n; m])?, GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let (m, part) = self.resolve(&x.signature)?;
        let tgt = self.target_signature(&x.signature)?;
        let n = x.signature.dims()[0];
        let mut out = Vec::with_capacity(tgt.p());
        for ((t, (a, b)), ty) in x.tensors.iter().zip(&part).zip(&tgt.types) {
            let total_a: usize = a.iter().sum();
            let mut src_pos = Vec::new();
            let (mut ca, mut cb) = (0, 0);
            for s in 0..m {
                src_pos.extend(ca..ca + a[s]);
                src_pos.extend(total_a + cb..total_a + cb + b[s]);
                ca += a[s];
                cb += b[s];
            }
            out.push(t.reindex(&tgt.spaces, ty.clone(), |idx| src_pos.iter().map(|&f| idx[f]).collect())?);
        }
        for ty in &tgt.types[x.signature.p()..] {
            out.push(MixedTensor::from_entries(&tgt.spaces, ty.clone(), x.signature.field, (0..n).map(|j| (vec![j, j], Scalar::one())))?);
        }
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(SPLIT, src, g)?;
        let (m, _) = self.resolve(src)?;
        gl_element(vec![g.matrices()[0].clone(); m])
    }

    fn describe_lift(&self) -> String {
        "g ↦ (g, …, g)".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let (m, part) = self.resolve(src)?;
        let tgt = self.target_signature(src)?;
        let p = src.p();
        let locate = |counts: &[usize], pos: usize| {
            let mut acc = 0;
            for (s, &c) in counts.iter().enumerate().take(m) {
                if pos < acc + c {
                    return (s, pos - acc);
                }
                acc += c;
            }
            unreachable!("position within partition")
        };
        let snet = Network::from_invariant(src, g)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for u in snet.live_nodes() {
            let Some(NodeKind::Summand(k)) = snet.kind(u) else { unreachable!("GL has no fundamentals") };
            let t = rw.net.add(NodeKind::Summand(k));
            let (a, b) = &part[k];
            for pos in 0..src.types[k].contra[0] {
                let (s, q) = locate(a, pos);
                if s == 0 {
                    rw.contra(0, (u, pos), 0, (t, q));
                } else {
                    let gn = rw.net.add(NodeKind::Summand(p + 2 * (s - 1) + 1));
                    rw.net.wire(s, (t, q), (gn, 0))?;
                    rw.contra(0, (u, pos), 0, (gn, 0));
                }
            }
            for pos in 0..src.types[k].co[0] {
                let (s, q) = locate(b, pos);
                if s == 0 {
                    rw.co(0, (u, pos), 0, (t, q));
                } else {
                    let fn_ = rw.net.add(NodeKind::Summand(p + 2 * (s - 1)));
                    rw.net.wire(s, (fn_, 0), (t, q))?;
                    rw.co(0, (u, pos), 0, (fn_, 0));
                }
            }
        }
        let net = rw.finish(&snet)?;
        finish_pullback(&net, tgt.dims(), 0, one())
    }
}

const SWAP: &str = "reduce_swap_gadget";

/// `(⊗_i V_i ⊗ V_i^*)^{⊕p}` into one space `X = ⊗_i V_i` with factor-swap gadgets.
pub struct SwapGadget;

impl SwapGadget {
    fn check(src: &Signature) -> Result<()> {
        require_group(SWAP, src, &[GroupTag::GL])?;
        let ones = vec![1; src.m()];
        if src.types.iter().any(|t| t.contra != ones || t.co != ones) {
            return Err(ReductionError::schema(SWAP, "summands must be ⊗_i V_i ⊗ V_i^*"));
        }
        Ok(())
    }

    /// `S_i ∈ X^{(2;2)}` exchanging the `i`-th tensor factor of two `X` factors.
    pub fn gadget(dims: &[usize], i: usize) -> Result<MixedTensor> {
        let n: usize = dims.iter().product();
        let sp = SpaceTuple::single(n)?;
        let mut entries = Vec::with_capacity(n * n);
        for c in 0..n {
            let dc = unradix(c, dims);
            for d in 0..n {
                let dd = unradix(d, dims);
                let (mut a, mut b) = (dc.clone(), dd.clone());
                a[i] = dd[i];
                b[i] = dc[i];
                entries.push((vec![radix(&a, dims), radix(&b, dims), c, d], Scalar::one()));
            }
        }
        Ok(MixedTensor::from_entries(&sp, TensorType::single(2, 2), tensor_core::Field::Q, entries)?)
    }
}

impl Reduction for SwapGadget {
    fn name(&self) -> String {
        SWAP.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        SwapGadget::check(src)?;
        let n: usize = src.dims().iter().product();
        let mut types = vec![TensorType::single(1, 1); src.p()];
        types.extend(vec![TensorType::single(2, 2); src.m()]);
        Ok(Signature::new(SpaceTuple::single(n)?, GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let dims = x.signature.dims().to_vec();
        let m = dims.len();
        let mut out = Vec::with_capacity(tgt.p());
        for t in &x.tensors {
            out.push(t.reindex(&tgt.spaces, TensorType::single(1, 1), |idx| {
                let a: Vec<usize> = (0..m).map(|i| idx[2 * i]).collect();
                let b: Vec<usize> = (0..m).map(|i| idx[2 * i + 1]).collect();
                vec![radix(&a, &dims), radix(&b, &dims)]
            })?);
        }
        for i in 0..m {
            out.push(SwapGadget::gadget(&dims, i)?);
        }
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(SWAP, src, g)?;
        gl_element(vec![g.kron_matrix()])
    }

    fn describe_lift(&self) -> String {
        "(g_1, …, g_m) ↦ g_1 ⊗ … ⊗ g_m".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let tgt = self.target_signature(src)?;
        let p = src.p();
        let snet = Network::from_invariant(src, g)?;
        let nodes = snet.live_nodes();
        let mut net = Network::for_signature(&tgt);
        let mut y = Vec::with_capacity(nodes.len());
        for &u in &nodes {
            y.push(net.add(snet.kind(u).expect("live")));
        }
        let pos_of = |u: usize| nodes.iter().position(|&w| w == u).expect("node");
        let mut cur: Vec<Slot> = y.iter().map(|&t| (t, 0)).collect();
        let big_n = nodes.len();
        for i in 0..src.m() {
            // inv[v]: the position whose i-th digit must arrive at position v
            let mut inv = vec![0; big_n];
            for (v, &u) in nodes.iter().enumerate() {
                let (w, _) = snet.target(i, (u, 0)).expect("closed");
                inv[pos_of(w)] = v;
            }
            let mut content: Vec<usize> = (0..big_n).collect();
            let mut where_is: Vec<usize> = (0..big_n).collect();
            for v in 0..big_n {
                let want = inv[v];
                let r = where_is[want];
                if r == v {
                    continue;
                }
                let s = net.add(NodeKind::Summand(p + i));
                net.wire(0, cur[v], (s, 0))?;
                net.wire(0, cur[r], (s, 1))?;
                cur[v] = (s, 0);
                cur[r] = (s, 1);
                let a = content[v];
                content.swap(v, r);
                where_is[a] = r;
                where_is[want] = v;
            }
        }
        for v in 0..big_n {
            net.wire(0, cur[v], (y[v], 0))?;
        }
        finish_pullback(&net, tgt.dims(), 0, one())
    }
}

const COLLAPSE: &str = "reduce_collapse_sum";
const COLLAPSE_DEG2: &str = "reduce_collapse_sum_deg2";

/// `(X ⊗ X^* ⊗ Y ⊗ Y^*)^{⊕p}` into `Z = X^{⊕p}` with the cyclic shift `r` and projection `s`.
pub struct CollapseSum {
    deg2: bool,
}

impl CollapseSum {
    /// Appends `r` and `s` as separate summands.
    pub fn two_conj() -> Self {
        CollapseSum { deg2: false }
    }

    /// Appends `r ⊗ s`.
    pub fn deg2() -> Self {
        CollapseSum { deg2: true }
    }

    fn stage(&self) -> &'static str {
        if self.deg2 {
            COLLAPSE_DEG2
        } else {
            COLLAPSE
        }
    }

    fn check(&self, src: &Signature) -> Result<(usize, usize, usize)> {
        require_group(self.stage(), src, &[GroupTag::GL])?;
        let t = TensorType { contra: vec![1, 1], co: vec![1, 1] };
        if src.m() != 2 || src.p() == 0 || src.types.iter().any(|s| *s != t) {
            return Err(ReductionError::schema(self.stage(), "expected (X ⊗ X^* ⊗ Y ⊗ Y^*)^p"));
        }
        Ok((src.p(), src.dims()[0], src.dims()[1]))
    }

    /// Cyclic shift and first-block projection on `X^{⊕p}`.
    pub fn shift_and_projection(sp: &SpaceTuple, p: usize, nx: usize) -> Result<(MixedTensor, MixedTensor)> {
        let ty = TensorType::unit(sp.len(), 0, 1, 1);
        let field = tensor_core::Field::Q;
        let r = MixedTensor::from_entries(
            sp,
            ty.clone(),
            field,
            (0..p).flat_map(|k| (0..nx).map(move |j| (vec![k * nx + j, ((k + 1) % p) * nx + j], Scalar::one()))),
        )?;
        let s = MixedTensor::from_entries(sp, ty, field, (0..nx).map(|j| (vec![j, j], Scalar::one())))?;
        Ok((r, s))
    }
}

impl Reduction for CollapseSum {
    fn name(&self) -> String {
        self.stage().into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        let (p, nx, ny) = self.check(src)?;
        let mut types = vec![TensorType { contra: vec![1, 1], co: vec![1, 1] }];
        if self.deg2 {
            types.push(TensorType { contra: vec![2, 0], co: vec![2, 0] });
        } else {
            types.push(TensorType::unit(2, 0, 1, 1));
            types.push(TensorType::unit(2, 0, 1, 1));
        }
        Ok(Signature::new(SpaceTuple::new(vec![p * nx, ny])?, GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let (p, nx, _) = self.check(&x.signature)?;
        let tgt = self.target_signature(&x.signature)?;
        let sp = &tgt.spaces;
        let mut entries = Vec::new();
        for (k, t) in x.tensors.iter().enumerate() {
            for (idx, v) in t.entries() {
                entries.push((vec![k * nx + idx[0], k * nx + idx[1], idx[2], idx[3]], v.clone()));
            }
        }
        let y = MixedTensor::from_entries(sp, tgt.types[0].clone(), x.signature.field, entries)?;
        let (r, s) = CollapseSum::shift_and_projection(sp, p, nx)?;
        let out = if self.deg2 { vec![y, r.tensor_product(&s)?] } else { vec![y, r, s] };
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(self.stage(), src, g)?;
        let (p, _, _) = self.check(src)?;
        let gx = &g.matrices()[0];
        let mut sum = gx.clone();
        for _ in 1..p {
            sum = sum.direct_sum(gx);
        }
        gl_element(vec![sum, g.matrices()[1].clone()])
    }

    fn describe_lift(&self) -> String {
        "(g, h) ↦ (g^{⊕p}, h)".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let (p, nx, _) = self.check(src)?;
        let tgt = self.target_signature(src)?;
        let snet = Network::from_invariant(src, g)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        let (mut r_uses, mut s_uses) = (0u32, 0u32);
        let deg2 = self.deg2;
        // returns (covariant input, contravariant output) of a gadget acting as r or s on Z
        let mut gadget = |net: &mut Network, is_r: bool| -> Result<(Slot, Slot)> {
            if !deg2 {
                let u = net.add(NodeKind::Summand(if is_r { 1 } else { 2 }));
                return Ok(((u, 0), (u, 0)));
            }
            if is_r {
                let u = net.add(NodeKind::Summand(1));
                net.wire(0, (u, 1), (u, 1))?;
                r_uses += 1;
                return Ok(((u, 0), (u, 0)));
            }
            let us: Vec<usize> = (0..p).map(|_| net.add(NodeKind::Summand(1))).collect();
            for j in 0..p {
                net.wire(0, (us[j], 0), (us[(j + 1) % p], 0))?;
            }
            for j in 0..p - 1 {
                net.wire(0, (us[j], 1), (us[j + 1], 1))?;
            }
            s_uses += 1;
            Ok(((us[0], 1), (us[p - 1], 1)))
        };
        for u in snet.live_nodes() {
            let Some(NodeKind::Summand(k)) = snet.kind(u) else { unreachable!("GL has no fundamentals") };
            let y = rw.net.add(NodeKind::Summand(0));
            rw.contra(1, (u, 0), 1, (y, 0));
            rw.co(1, (u, 0), 1, (y, 0));
            let mut cur = (y, 0);
            for _ in 0..k {
                let (i, o) = gadget(&mut rw.net, true)?;
                rw.net.wire(0, cur, i)?;
                cur = o;
            }
            let (i, o) = gadget(&mut rw.net, false)?;
            rw.net.wire(0, cur, i)?;
            rw.contra(0, (u, 0), 0, o);
            let (entry, mut prev) = gadget(&mut rw.net, false)?;
            for _ in 0..(p - k) % p {
                let (i, o) = gadget(&mut rw.net, true)?;
                rw.net.wire(0, prev, i)?;
                prev = o;
            }
            rw.net.wire(0, prev, (y, 0))?;
            rw.co(0, (u, 0), 0, entry);
        }
        let net = rw.finish(&snet)?;
        let nz = BigRational::from_integer(BigInt::from(p * nx));
        let nxr = BigRational::from_integer(BigInt::from(nx));
        let factor = num_traits::pow(nxr, r_uses as usize) * num_traits::pow(nz, s_uses as usize);
        finish_pullback(&net, tgt.dims(), r_uses + s_uses, factor)
    }
}

const DETUPLE: &str = "reduce_detuple";

/// `Σ_k x_k ⊗ P_{π_k}` with the first `p` permutations of `S_d`; `X` is extended by a complement when `dim X < d`.
#[derive(Debug, Clone, Default)]
pub struct Detuple {
    d: Option<usize>,
}

impl Detuple {
    /// Smallest `d` with `d! ≥ p`.
    pub fn auto() -> Self {
        Detuple { d: None }
    }

    pub fn with_degree(d: usize) -> Self {
        Detuple { d: Some(d) }
    }

    fn degree(&self, p: usize) -> Result<usize> {
        let fact = |d: usize| (1..=d).try_fold(1usize, |a, b| a.checked_mul(b)).unwrap_or(usize::MAX);
        let d = match self.d {
            Some(d) => d,
            None => (0..).find(|&d| fact(d) >= p).expect("factorials grow"),
        };
        if p > fact(d) {
            return Err(ReductionError::schema(DETUPLE, format!("{p} summands exceed {d}!")));
        }
        Ok(d)
    }

    fn check(&self, src: &Signature) -> Result<(usize, usize)> {
        require_group(DETUPLE, src, &[GroupTag::GL, GroupTag::O, GroupTag::Sp])?;
        single_space(DETUPLE, src)?;
        let first = src.types.first().ok_or_else(|| ReductionError::schema(DETUPLE, "no summands"))?;
        if src.types.iter().any(|t| t != first) {
            return Err(ReductionError::schema(DETUPLE, "summands of different types"));
        }
        let c = first.contra[0];
        let ok = match src.group {
            GroupTag::GL => first.co[0] == c,
            _ => first.co[0] == 0,
        };
        if !ok {
            return Err(ReductionError::schema(DETUPLE, format!("summand type {first} not accepted for {}", src.group)));
        }
        Ok((c, self.degree(src.p())?))
    }

    /// Form on the complement `X'' ` added when `dim X < d`.
    fn complement(src: &Signature, d: usize) -> Option<Matrix> {
        let n = src.dims()[0];
        if n >= d {
            return None;
        }
        Some(match src.group {
            GroupTag::Sp => crate::util::hyperbolic_form((d - n).div_ceil(2), true),
            _ => Matrix::identity(d - n),
        })
    }

    fn extended(src: &Signature, d: usize) -> Result<(SpaceTuple, Option<Vec<Matrix>>)> {
        let Some(h) = Detuple::complement(src, d) else {
            return Ok((src.spaces.clone(), src.forms.clone()));
        };
        let sp = SpaceTuple::single(src.dims()[0] + h.rows())?;
        let forms = src.forms.as_ref().map(|f| vec![f[0].direct_sum(&h)]);
        Ok((sp, forms))
    }
}

impl Reduction for Detuple {
    fn name(&self) -> String {
        DETUPLE.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        let (c, d) = self.check(src)?;
        let t = if src.group == GroupTag::GL { TensorType::single(c + d, c + d) } else { TensorType::single(c + 2 * d, 0) };
        let (sp, forms) = Detuple::extended(src, d)?;
        Ok(Signature::new(sp, src.group, src.field, vec![t], forms)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let (c, d) = self.check(&x.signature)?;
        let tgt = self.target_signature(&x.signature)?;
        let (sp, forms) = Detuple::extended(&x.signature, d)?;
        let perms = Perm::all(d);
        let inner = TensorType::single(c + d, x.tensors[0].ttype().co[0] + d);
        let mut sum = MixedTensor::zero(&sp, inner, x.signature.field)?;
        for (xk, pi) in x.tensors.iter().zip(&perms) {
            let xk = xk.reindex(&sp, xk.ttype().clone(), |idx| idx.to_vec())?;
            sum = sum.add(&xk.tensor_product(&MixedTensor::permutation(&sp, 0, pi)?)?)?;
        }
        if x.signature.group != GroupTag::GL {
            sum = sum.lower_indices(forms.as_ref().expect("forms"))?;
        }
        Ok(Instance::new(tgt, vec![sum])?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(DETUPLE, src, g)?;
        let (_, d) = self.check(src)?;
        match Detuple::complement(src, d) {
            None => Ok(g.clone()),
            Some(h) => {
                let (_, forms) = Detuple::extended(src, d)?;
                Ok(GroupElement::new(src.group, vec![g.matrices()[0].direct_sum(&Matrix::identity(h.rows()))], forms)?)
            }
        }
    }

    fn describe_lift(&self) -> String {
        "g ↦ g (g ↦ g ⊕ Id when dim X < d)".into()
    }

    fn injective_linear(&self) -> bool {
        true
    }
}

const RANK: &str = "reduce_rank_embed";

/// `(x, y, z) ↦ (x ⊗ Id + y ⊗ P_(12), z)`; dimension one is first embedded into dimension two.
pub struct RankEmbed;

impl RankEmbed {
    fn check(src: &Signature) -> Result<usize> {
        require_group(RANK, src, &[GroupTag::GL])?;
        let n = single_space(RANK, src)?;
        let want = [TensorType::single(2, 2), TensorType::single(1, 1), TensorType::single(1, 1)];
        if src.types != want {
            return Err(ReductionError::schema(RANK, "expected X^(2;2) ⊕ X^(1;1) ⊕ X^(1;1)"));
        }
        Ok(n)
    }
}

impl Reduction for RankEmbed {
    fn name(&self) -> String {
        RANK.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        let n = RankEmbed::check(src)?;
        let types = vec![TensorType::single(3, 3), TensorType::single(1, 1)];
        Ok(Signature::new(SpaceTuple::single(n.max(2))?, GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let n = RankEmbed::check(&x.signature)?;
        let tgt = self.target_signature(&x.signature)?;
        let sp = &tgt.spaces;
        let (xs, ys, zs) = if n == 1 {
            let at = |t: &MixedTensor, k: usize| t.get(&vec![0; k]);
            (
                MixedTensor::identity_power(sp, 0, 2)?.scale(&at(&x.tensors[0], 4)?),
                MixedTensor::identity(sp, 0)?.scale(&at(&x.tensors[1], 2)?),
                MixedTensor::identity(sp, 0)?.scale(&at(&x.tensors[2], 2)?),
            )
        } else {
            (x.tensors[0].clone(), x.tensors[1].clone(), x.tensors[2].clone())
        };
        let swap = MixedTensor::permutation(sp, 0, &Perm::transposition(2, 0, 1))?;
        let first = xs.tensor_product(&MixedTensor::identity(sp, 0)?)?.add(&ys.tensor_product(&swap)?)?;
        Ok(Instance::new(tgt, vec![first, zs])?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(RANK, src, g)?;
        if src.dims()[0] == 1 {
            return gl_element(vec![Matrix::identity(2)]);
        }
        Ok(g.clone())
    }

    fn describe_lift(&self) -> String {
        "g ↦ g (dimension one: g ↦ Id_2)".into()
    }

    fn injective_linear(&self) -> bool {
        true
    }
}

const POWER: &str = "reduce_power_space";

/// `(V^{(c;c)})^{⊕q}` over `(V, W = V^{⊗c})`: the summands as `W ⊗ W^*` plus the inclusions `r(1..c)`.
pub struct PowerSpace;

impl PowerSpace {
    /// `r(i) ∈ V ⊗ V^* ⊗ W ⊗ W^*`, 0-based `i`.
    pub fn inclusion(sp: &SpaceTuple, c: usize, i: usize) -> Result<MixedTensor> {
        let n = sp.dim(0);
        let dims = vec![n; c];
        let rest = n.pow(c as u32 - 1);
        let mut entries = Vec::with_capacity(n * n * rest);
        for a in 0..n {
            for cc in 0..n {
                for e in 0..rest {
                    let mut other = unradix(e, &dims[1..]);
                    other.insert(i, 0);
                    let (mut b, mut d) = (other.clone(), other);
                    b[i] = cc;
                    d[i] = a;
                    entries.push((vec![a, cc, radix(&b, &dims), radix(&d, &dims)], Scalar::one()));
                }
            }
        }
        let ty = TensorType { contra: vec![1, 1], co: vec![1, 1] };
        Ok(MixedTensor::from_entries(sp, ty, tensor_core::Field::Q, entries)?)
    }
}

impl Reduction for PowerSpace {
    fn name(&self) -> String {
        POWER.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        require_group(POWER, src, &[GroupTag::GL])?;
        let c = uniform_order(POWER, src)?;
        if c == 0 {
            return Err(ReductionError::schema(POWER, "summands of order zero"));
        }
        let n = src.dims()[0];
        let w = n.checked_pow(c as u32).ok_or_else(|| ReductionError::schema(POWER, "W too large"))?;
        let mut types = vec![TensorType { contra: vec![0, 1], co: vec![0, 1] }; src.p()];
        types.extend(vec![TensorType { contra: vec![1, 1], co: vec![1, 1] }; c]);
        Ok(Signature::new(SpaceTuple::new(vec![n, w])?, GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let c = uniform_order(POWER, &x.signature)?;
        let dims = vec![x.signature.dims()[0]; c];
        let mut out = Vec::with_capacity(tgt.p());
        for t in &x.tensors {
            out.push(t.reindex(&tgt.spaces, tgt.types[0].clone(), |idx| vec![radix(&idx[..c], &dims), radix(&idx[c..], &dims)])?);
        }
        for i in 0..c {
            out.push(PowerSpace::inclusion(&tgt.spaces, c, i)?);
        }
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(POWER, src, g)?;
        let c = uniform_order(POWER, src)?;
        let g0 = &g.matrices()[0];
        let mut k = g0.clone();
        for _ in 1..c {
            k = k.kron(g0);
        }
        gl_element(vec![g0.clone(), k])
    }

    fn describe_lift(&self) -> String {
        "g ↦ (g, g^{⊗c})".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let tgt = self.target_signature(src)?;
        let c = uniform_order(POWER, src)?;
        let q = src.p();
        let snet = Network::from_invariant(src, g)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for u in snet.live_nodes() {
            let kind = snet.kind(u).expect("live");
            let t = rw.net.add(kind);
            let rs: Vec<usize> = (0..c).map(|i| rw.net.add(NodeKind::Summand(q + i))).collect();
            rw.net.wire(1, (t, 0), (rs[0], 0))?;
            for i in 0..c - 1 {
                rw.net.wire(1, (rs[i], 0), (rs[i + 1], 0))?;
            }
            rw.net.wire(1, (rs[c - 1], 0), (t, 0))?;
            for (i, &r) in rs.iter().enumerate() {
                rw.contra(0, (u, i), 0, (r, 0));
                rw.co(0, (u, i), 0, (r, 0));
            }
        }
        let net = rw.finish(&snet)?;
        finish_pullback(&net, tgt.dims(), 0, one())
    }
}
