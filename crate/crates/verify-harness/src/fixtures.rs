use invariant_engine::{ContractionInvariant, Instance, Signature};
use reduction_catalog::{
    hyperbolic_form, pipeline, pipeline_names, step, step_names, Pullback, Reduction, Result as RResult,
};
use tensor_core::{Field, GroupElement, GroupTag, Matrix, Scalar, SpaceTuple, TensorType};

use crate::{HarnessError, Result};

/// How random source wirings are drawn for the pullback check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WiringPlan {
    /// Random degrees with at most this many contravariant slots per space.
    Slots(usize),
    /// One copy of the single summand, completed with forms.
    DegreeOne,
}

type SourceFn = fn(usize) -> Result<Signature>;

/// A reduction together with a family of source signatures indexed by dimension.
pub struct Fixture {
    pub name: String,
    pub label: &'static str,
    pub reduction: Box<dyn Reduction>,
    source: SourceFn,
    pub max_dim: usize,
    pub wiring: WiringPlan,
}

impl Fixture {
    pub fn source(&self, n: usize) -> Result<Signature> {
        (self.source)(n)
    }

    /// Requested dimensions clamped to the fixture's maximum.
    pub fn dims(&self, requested: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = requested.iter().map(|&d| d.clamp(1, self.max_dim)).collect();
        out.dedup();
        out
    }
}

fn t(contra: &[usize], co: &[usize]) -> TensorType {
    TensorType { contra: contra.to_vec(), co: co.to_vec() }
}

fn s(a: usize, b: usize) -> TensorType {
    TensorType::single(a, b)
}

fn sig(dims: Vec<usize>, group: GroupTag, types: Vec<TensorType>, forms: Option<Vec<Matrix>>) -> Result<Signature> {
    let field = if group == GroupTag::U { Field::Qi } else { Field::Q };
    Ok(Signature::new(SpaceTuple::new(dims)?, group, field, types, forms)?)
}

fn gl(dims: Vec<usize>, types: Vec<TensorType>) -> Result<Signature> {
    sig(dims, GroupTag::GL, types, None)
}

/// `diag(1, 2, …, n)`.
fn diagonal_form(n: usize) -> Matrix {
    Matrix::diagonal((1..=n as i64).map(Scalar::from_int).collect())
}

fn even(n: usize) -> usize {
    2 * n.div_ceil(2)
}

fn orth(n: usize, types: Vec<TensorType>) -> Result<Signature> {
    sig(vec![n], GroupTag::O, types, Some(vec![diagonal_form(n)]))
}

fn symp(n: usize, types: Vec<TensorType>) -> Result<Signature> {
    let n = even(n);
    sig(vec![n], GroupTag::Sp, types, Some(vec![hyperbolic_form(n / 2, true)]))
}

fn ones2() -> TensorType {
    t(&[1, 1], &[1, 1])
}

struct Template {
    name: &'static str,
    label: &'static str,
    source: SourceFn,
    max_dim: usize,
    wiring: WiringPlan,
}

const SIX: WiringPlan = WiringPlan::Slots(6);

fn templates() -> Vec<Template> {
    let sp = |name, label, source, max_dim, wiring| Template { name, label, source, max_dim, wiring };
    vec![
        sp("reduce_balance", "GL", |n| gl(vec![n, n], vec![t(&[1, 0], &[0, 1]), t(&[0, 1], &[1, 0]), t(&[1, 0], &[1, 0])]), 3, SIX),
        sp("reduce_pad", "GL", |n| gl(vec![n], vec![s(1, 1), s(2, 2)]), 3, SIX),
        sp("reduce_pad", "O", |n| orth(n, vec![s(1, 1), s(0, 0)]), 3, SIX),
        sp("reduce_merge_spaces", "GL", |n| gl(vec![n, 2], vec![t(&[1, 0], &[0, 1]), t(&[0, 1], &[1, 0]), t(&[1, 1], &[1, 1])]), 3, SIX),
        sp("reduce_split_spaces", "GL", |n| gl(vec![n], vec![s(2, 2), s(2, 2)]), 3, SIX),
        sp("reduce_swap_gadget", "GL", |n| gl(vec![n, 2], vec![ones2(), ones2()]), 3, SIX),
        sp("reduce_collapse_sum", "GL", |n| gl(vec![n, 2], vec![ones2(), ones2()]), 3, SIX),
        sp("reduce_collapse_sum_deg2", "GL", |n| gl(vec![n, 2], vec![ones2(), ones2()]), 3, SIX),
        sp("reduce_detuple", "GL", |n| gl(vec![n], vec![s(1, 1), s(1, 1)]), 3, SIX),
        sp("reduce_detuple", "O", |n| orth(n, vec![s(1, 0), s(1, 0)]), 3, SIX),
        sp("reduce_detuple", "Sp", |n| symp(n, vec![s(1, 0), s(1, 0), s(1, 0)]), 2, SIX),
        sp("reduce_rank_embed", "GL", |n| gl(vec![n], vec![s(2, 2), s(1, 1), s(1, 1)]), 3, SIX),
        sp("reduce_form_to_gl", "O", |n| orth(n, vec![s(2, 0), s(1, 0)]), 3, SIX),
        sp("reduce_form_to_gl", "Sp", |n| symp(n, vec![s(2, 0), s(1, 0)]), 2, SIX),
        sp("reduce_gl_to_form", "GL", |n| gl(vec![n], vec![s(1, 1), s(2, 0), s(0, 2)]), 3, SIX),
        sp("reduce_gl_to_form_sp", "GL", |n| gl(vec![n], vec![s(1, 1), s(2, 0), s(0, 2)]), 3, SIX),
        sp("reduce_lower_indices", "O", |n| orth(n, vec![s(1, 1), s(0, 2)]), 3, SIX),
        sp("reduce_lower_indices", "Sp", |n| symp(n, vec![s(1, 1), s(0, 2)]), 2, SIX),
        sp("reduce_cube_pair", "O", |n| orth(n, vec![s(12, 0)]), 2, WiringPlan::DegreeOne),
        sp("reduce_cube_pair", "Sp", |n| symp(n, vec![s(12, 0)]), 2, WiringPlan::DegreeOne),
        sp("reduce_power_space", "GL", |n| gl(vec![n], vec![s(2, 2), s(2, 2)]), 3, SIX),
        sp("gi_encode", "Sn", |n| sig(vec![n], GroupTag::Sn, vec![s(2, 0)], None), 3, SIX),
        sp("unitary_lift", "U", |n| sig(vec![n], GroupTag::U, vec![s(1, 0), s(1, 1)], None), 3, SIX),
        sp("peps3", "GL", |n| gl(vec![n], vec![s(1, 1), s(1, 0), s(0, 1)]), 2, SIX),
        sp("deg2-pair", "GL", |n| gl(vec![n], vec![s(1, 1), s(1, 0), s(0, 1)]), 2, SIX),
        sp("deg2-plus-conj", "GL", |n| gl(vec![n], vec![s(1, 1), s(1, 0), s(0, 1)]), 2, SIX),
        sp("x44", "GL", |n| gl(vec![n], vec![s(2, 2), s(2, 2)]), 3, SIX),
        sp("x33-x11", "GL", |n| gl(vec![n], vec![s(2, 2), s(1, 1), s(1, 1)]), 3, SIX),
        sp("o33-pair", "GL", |n| gl(vec![n], vec![s(3, 3)]), 2, SIX),
        sp("sp33-pair", "GL", |n| gl(vec![n], vec![s(3, 3)]), 2, SIX),
        sp("o7", "O", |n| sig(vec![n], GroupTag::O, vec![s(3, 0), s(3, 0)], Some(vec![Matrix::identity(n)])), 3, SIX),
        sp("sp7", "Sp", |n| symp(n, vec![s(3, 0), s(3, 0)]), 2, SIX),
        sp("gi-to-peps", "Sn", |n| sig(vec![n], GroupTag::Sn, vec![s(2, 0)], None), 3, SIX),
        sp(CORRUPTED, "GL", |n| gl(vec![n], vec![s(1, 1), s(2, 2)]), 3, SIX),
    ]
}

/// Name of the deliberately broken fixture, excluded from `all`.
pub const CORRUPTED: &str = "corrupted_pad";

/// Steps and named pipelines covered by `all`.
pub fn reduction_names() -> Vec<&'static str> {
    step_names().iter().chain(pipeline_names()).copied().collect()
}

fn build(name: &str) -> Result<Box<dyn Reduction>> {
    if name == CORRUPTED {
        return Ok(Box::new(Corrupted(step("reduce_pad")?)));
    }
    if let Ok(r) = step(name) {
        return Ok(r);
    }
    pipeline(name).map(|p| Box::new(p) as Box<dyn Reduction>).map_err(|_| HarnessError::UnknownReduction(name.into()))
}

/// Fixtures for one name, or for every name in [`reduction_names`] with `"all"`.
pub fn fixtures(name: &str) -> Result<Vec<Fixture>> {
    let wanted: Vec<&str> = if name == "all" { reduction_names() } else { vec![name] };
    let mut out = Vec::new();
    for w in wanted {
        let found: Vec<Template> = templates().into_iter().filter(|s| s.name == w).collect();
        if found.is_empty() {
            return Err(HarnessError::UnknownReduction(w.into()));
        }
        for s in found {
            out.push(Fixture {
                name: s.name.into(),
                label: s.label,
                reduction: build(s.name)?,
                source: s.source,
                max_dim: s.max_dim,
                wiring: s.wiring,
            });
        }
    }
    Ok(out)
}

/// Pad with a lift that inverts the group element.
struct Corrupted(Box<dyn Reduction>);

impl Reduction for Corrupted {
    fn name(&self) -> String {
        CORRUPTED.into()
    }

    fn target_signature(&self, src: &Signature) -> RResult<Signature> {
        self.0.target_signature(src)
    }

    fn apply(&self, x: &Instance) -> RResult<Instance> {
        self.0.apply(x)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> RResult<GroupElement> {
        Ok(self.0.lift_group(src, g)?.inverse())
    }

    fn describe_lift(&self) -> String {
        "g ↦ g^{-1}".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> RResult<Pullback> {
        let mut pb = self.0.pullback(src, g)?;
        pb.factor *= num_rational::BigRational::from_integer(2.into());
        Ok(pb)
    }

    fn injective_linear(&self) -> bool {
        true
    }
}
