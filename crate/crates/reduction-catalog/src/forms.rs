use invariant_engine::{
    fundamental_kinds, simplify_forms, ContractionInvariant, FundamentalKind, Instance, Network, NodeKind, Signature, Slot,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use tensor_core::{GroupElement, GroupTag, Matrix, MixedTensor, Perm, SpaceTuple, TensorType};

use crate::rewrite::{finish_pullback, pow_dims, Rewrite};
use crate::util::{copy_node, cube_form, hyperbolic_form, matrix_tensor, radix, require_element, require_group};
use crate::{Pullback, Reduction, ReductionError, Result};

fn forms_of<'a>(stage: &str, sig: &'a Signature) -> Result<&'a [Matrix]> {
    sig.forms.as_deref().ok_or_else(|| ReductionError::schema(stage, "missing forms"))
}

fn signed(sign: i64, loops: &[usize], dims: &[usize]) -> BigRational {
    BigRational::from_integer(BigInt::from(sign)) * pow_dims(dims, loops)
}

const FORM_TO_GL: &str = "reduce_form_to_gl";

/// `x ↦ (x, g_1, …, g_m)` under GL.
pub struct FormToGl;

impl FormToGl {
    fn check(src: &Signature) -> Result<()> {
        require_group(FORM_TO_GL, src, &[GroupTag::O, GroupTag::Sp])?;
        forms_of(FORM_TO_GL, src)?;
        if src.types.iter().any(|t| t.co.iter().any(|&b| b > 0)) {
            return Err(ReductionError::schema(FORM_TO_GL, "summands must be purely contravariant"));
        }
        Ok(())
    }
}

impl Reduction for FormToGl {
    fn name(&self) -> String {
        FORM_TO_GL.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        FormToGl::check(src)?;
        let m = src.m();
        let mut types = src.types.clone();
        types.extend((0..m).map(|i| TensorType::unit(m, i, 0, 2)));
        Ok(Signature::new(src.spaces.clone(), GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let m = x.signature.m();
        let mut out = x.tensors.clone();
        for (i, g) in forms_of(FORM_TO_GL, &x.signature)?.iter().enumerate() {
            out.push(matrix_tensor(&x.signature.spaces, TensorType::unit(m, i, 0, 2), g)?);
        }
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(FORM_TO_GL, src, g)?;
        Ok(g.retag(GroupTag::GL, None)?)
    }

    fn describe_lift(&self) -> String {
        "g ↦ g as an element of GL".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let tgt = self.target_signature(src)?;
        let p = src.p();
        let kinds = fundamental_kinds(src.group, src.m());
        let (snet, sign, loops) = simplify_forms(&Network::from_invariant(src, g)?, src.group)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for u in snet.live_nodes() {
            let kind = match snet.kind(u).expect("live") {
                NodeKind::Fundamental(j) => match kinds[j] {
                    FundamentalKind::Form(i) => NodeKind::Summand(p + i),
                    _ => return Err(ReductionError::schema(FORM_TO_GL, "dual form left after simplification")),
                },
                k => k,
            };
            copy_node(&mut rw, &snet, u, kind);
        }
        let net = rw.finish(&snet)?;
        let c = loops.iter().sum::<usize>() as u32;
        finish_pullback(&net, tgt.dims(), c, signed(sign, &loops, src.dims()).recip())
    }
}

const GL_TO_FORM: &str = "reduce_gl_to_form";
const GL_TO_FORM_SP: &str = "reduce_gl_to_form_sp";

/// `V_i ↦ W_i = V_i ⊕ V_i^*` with the hyperbolic form, symmetric or skew.
pub struct GlToForm {
    skew: bool,
}

impl GlToForm {
    pub fn orthogonal() -> Self {
        GlToForm { skew: false }
    }

    pub fn symplectic() -> Self {
        GlToForm { skew: true }
    }

    fn stage(&self) -> &'static str {
        if self.skew {
            GL_TO_FORM_SP
        } else {
            GL_TO_FORM
        }
    }

    fn group(&self) -> GroupTag {
        if self.skew {
            GroupTag::Sp
        } else {
            GroupTag::O
        }
    }
}

impl Reduction for GlToForm {
    fn name(&self) -> String {
        self.stage().into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        require_group(self.stage(), src, &[GroupTag::GL])?;
        let dims: Vec<usize> = src.dims().iter().map(|n| 2 * n).collect();
        let forms = src.dims().iter().map(|&n| hyperbolic_form(n, self.skew)).collect();
        Ok(Signature::new(SpaceTuple::new(dims)?, self.group(), src.field, src.types.clone(), Some(forms))?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let mut out = Vec::with_capacity(x.tensors.len());
        for t in &x.tensors {
            out.push(t.reindex(&tgt.spaces, t.ttype().clone(), |idx| idx.to_vec())?);
        }
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(self.stage(), src, g)?;
        let tgt = self.target_signature(src)?;
        let mats = g.matrices().iter().zip(g.inverse_matrices()).map(|(a, ai)| a.direct_sum(&ai.transpose())).collect();
        Ok(GroupElement::new(self.group(), mats, tgt.forms)?)
    }

    fn describe_lift(&self) -> String {
        "g ↦ g ⊕ g^{-T}".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let tgt = self.target_signature(src)?;
        let snet = Network::from_invariant(src, g)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for u in snet.live_nodes() {
            copy_node(&mut rw, &snet, u, snet.kind(u).expect("live"));
        }
        let net = rw.finish(&snet)?;
        finish_pullback(&net, tgt.dims(), 0, BigRational::from_integer(1.into()))
    }
}

const LOWER: &str = "reduce_lower_indices";

/// `X^{(a;b)} ≅ X^{(a+b;0)}` through the form.
pub struct LowerIndices;

impl Reduction for LowerIndices {
    fn name(&self) -> String {
        LOWER.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        require_group(LOWER, src, &[GroupTag::O, GroupTag::Sp])?;
        let m = src.m();
        let types = src
            .types
            .iter()
            .map(|t| TensorType { contra: (0..m).map(|i| t.contra[i] + t.co[i]).collect(), co: vec![0; m] })
            .collect();
        Ok(src.with_types(types)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let forms = forms_of(LOWER, &x.signature)?;
        let out = x.tensors.iter().map(|t| t.lower_indices(forms)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Instance::new(tgt, out)?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(LOWER, src, g)?;
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
        let tgt = self.target_signature(src)?;
        let kinds = fundamental_kinds(src.group, src.m());
        let form = |i: usize| kinds.iter().position(|&k| k == FundamentalKind::Form(i)).expect("form kind");
        let snet = Network::from_invariant(src, g)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for u in snet.live_nodes() {
            let kind = snet.kind(u).expect("live");
            let NodeKind::Summand(_) = kind else {
                copy_node(&mut rw, &snet, u, kind);
                continue;
            };
            let t = rw.net.add(kind);
            let ty = snet.node_type(u);
            for i in 0..src.m() {
                for p in 0..ty.contra[i] {
                    rw.contra(i, (u, p), i, (t, p));
                }
                for q in 0..ty.co[i] {
                    let gq = rw.net.add(NodeKind::Fundamental(form(i)));
                    rw.net.wire(i, (t, ty.contra[i] + q), (gq, 0))?;
                    rw.co(i, (u, q), i, (gq, 1));
                }
            }
        }
        let net = rw.finish(&snet)?;
        finish_pullback(&net, tgt.dims(), 0, BigRational::from_integer(1.into()))
    }
}

const CUBE: &str = "reduce_cube_pair";

/// `X^{⊗12}` under `O(X)` or `Sp(X)` into `Y^{⊗3} ⊕ Y^{⊗2} ⊗ Y^*` under `O(Y)`, `Y = X^{⊗4}`.
pub struct CubePair;

impl CubePair {
    fn check(src: &Signature) -> Result<usize> {
        require_group(CUBE, src, &[GroupTag::O, GroupTag::Sp])?;
        forms_of(CUBE, src)?;
        if src.m() != 1 || src.types != [TensorType::single(12, 0)] {
            return Err(ReductionError::schema(CUBE, "expected a single X^{⊗12} summand"));
        }
        Ok(src.dims()[0])
    }

    /// `ŝ ∈ Y^{⊗2} ⊗ Y^*` from `r = ((23), id)·(Id^{⊗2} ⊗ ḡ)` and `s = r ⊗ r`.
    pub fn s_hat(g: &Matrix) -> Result<MixedTensor> {
        let n = g.rows();
        let sp = SpaceTuple::single(n)?;
        let gbar = matrix_tensor(&sp, TensorType::single(2, 0), &g.inverse()?)?;
        let r = MixedTensor::identity_power(&sp, 0, 2)?
            .tensor_product(&gbar)?
            .permute_factors(&[(Perm::transposition(4, 1, 2), Perm::identity(2))])?;
        let s = r.tensor_product(&r)?;
        let dims = [n; 4];
        let ysp = SpaceTuple::single(n.pow(4))?;
        Ok(s.reindex(&ysp, TensorType::single(2, 1), |idx| {
            vec![radix(&idx[0..4], &dims), radix(&idx[4..8], &dims), radix(&idx[8..12], &dims)]
        })?)
    }

    /// The X-level network with every Y slot split into four X slots.
    fn expand(y: &Network, sig_x: &Signature) -> Result<Network> {
        let kinds = fundamental_kinds(sig_x.group, 1);
        let form = NodeKind::Fundamental(kinds.iter().position(|&k| k == FundamentalKind::Form(0)).expect("form"));
        let dual = NodeKind::Fundamental(kinds.iter().position(|&k| k == FundamentalKind::DualForm(0)).expect("dual"));
        let mut x = Network::for_signature(sig_x);
        let mut contra: std::collections::HashMap<Slot, [Slot; 4]> = Default::default();
        let mut co: std::collections::HashMap<Slot, [Slot; 4]> = Default::default();
        for u in y.live_nodes() {
            match y.kind(u).expect("live") {
                NodeKind::Summand(0) => {
                    let t = x.add(NodeKind::Summand(0));
                    for j in 0..3 {
                        contra.insert((u, j), [(t, 4 * j), (t, 4 * j + 1), (t, 4 * j + 2), (t, 4 * j + 3)]);
                    }
                }
                NodeKind::Summand(1) => {
                    let id: Vec<usize> = (0..4).map(|_| x.add(NodeKind::Identity(0))).collect();
                    let (g1, g2) = (x.add(dual), x.add(dual));
                    contra.insert((u, 0), [(id[0], 0), (g1, 0), (id[1], 0), (g1, 1)]);
                    contra.insert((u, 1), [(id[2], 0), (g2, 0), (id[3], 0), (g2, 1)]);
                    co.insert((u, 0), [(id[0], 0), (id[1], 0), (id[2], 0), (id[3], 0)]);
                }
                NodeKind::Fundamental(0) => {
                    let gs: Vec<usize> = (0..4).map(|_| x.add(form)).collect();
                    for k in 0..2 {
                        co.insert((u, k), [(gs[0], k), (gs[1], k), (gs[2], k), (gs[3], k)]);
                    }
                }
                k => return Err(ReductionError::schema(CUBE, format!("unexpected node {k:?} in pullback"))),
            }
        }
        for (_, a, b) in y.wires() {
            for (s, t) in contra[&a].iter().zip(&co[&b]) {
                x.wire(0, *s, *t)?;
            }
        }
        Ok(x)
    }
}

impl Reduction for CubePair {
    fn name(&self) -> String {
        CUBE.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        let n = CubePair::check(src)?;
        let h = cube_form(&src.forms.as_ref().expect("checked")[0]);
        let types = vec![TensorType::single(3, 0), TensorType::single(2, 1)];
        Ok(Signature::new(SpaceTuple::single(n.pow(4))?, GroupTag::O, src.field, types, Some(vec![h]))?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let n = CubePair::check(&x.signature)?;
        let tgt = self.target_signature(&x.signature)?;
        let dims = [n; 4];
        let xh = x.tensors[0].reindex(&tgt.spaces, TensorType::single(3, 0), |idx| {
            (0..3).map(|j| radix(&idx[4 * j..4 * j + 4], &dims)).collect()
        })?;
        let sh = CubePair::s_hat(&x.signature.forms.as_ref().expect("checked")[0])?;
        Ok(Instance::new(tgt, vec![xh, sh])?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(CUBE, src, g)?;
        let tgt = self.target_signature(src)?;
        let a = &g.matrices()[0];
        Ok(GroupElement::new(GroupTag::O, vec![a.kron(a).kron(a).kron(a)], tgt.forms)?)
    }

    fn describe_lift(&self) -> String {
        "g ↦ g^{⊗4}".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let tgt = self.target_signature(src)?;
        let kinds = fundamental_kinds(src.group, 1);
        let (snet, sign0, loops0) = simplify_forms(&Network::from_invariant(src, g)?, src.group)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for u in snet.live_nodes() {
            match snet.kind(u).expect("live") {
                NodeKind::Summand(_) => {
                    let xh = rw.net.add(NodeKind::Summand(0));
                    for j in 0..3 {
                        let z: Vec<usize> = (0..3).map(|_| rw.net.add(NodeKind::Summand(1))).collect();
                        rw.net.wire(0, (xh, j), (z[0], 0))?;
                        rw.net.wire(0, (z[0], 0), (z[1], 0))?;
                        rw.net.wire(0, (z[0], 1), (z[2], 0))?;
                        let ends = [(z[1], 0), (z[1], 1), (z[2], 0), (z[2], 1)];
                        for (k, e) in ends.into_iter().enumerate() {
                            rw.contra(0, (u, 4 * j + k), 0, e);
                        }
                    }
                }
                NodeKind::Fundamental(j) if kinds[j] == FundamentalKind::Form(0) => {
                    copy_node(&mut rw, &snet, u, NodeKind::Fundamental(0));
                }
                k => return Err(ReductionError::schema(CUBE, format!("unexpected node {k:?} after simplification"))),
            }
        }
        let net = rw.finish(&snet)?;
        let (xnet, xl) = CubePair::expand(&net, src)?.remove_identities()?;
        let (_, sign1, loops1) = simplify_forms(&xnet, src.group)?;
        let l1: Vec<usize> = vec![xl[0] + loops1[0]];
        let factor = signed(sign1, &l1, src.dims()) / signed(sign0, &loops0, src.dims());
        let c = (l1[0] + loops0[0]) as u32;
        Ok(Pullback { invariant: net.to_invariant()?, c, factor })
    }
}
