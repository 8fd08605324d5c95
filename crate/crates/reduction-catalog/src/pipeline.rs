use invariant_engine::{ContractionInvariant, Instance, Signature};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use tensor_core::{GroupElement, GroupTag, TensorType};

use crate::forms::{CubePair, FormToGl, GlToForm, LowerIndices};
use crate::gi::GiEncode;
use crate::gl::{Balance, CollapseSum, Detuple, MergeSpaces, Pad, PowerSpace, RankEmbed, SplitSpaces, SwapGadget};
use crate::unitary::UnitaryLift;
use crate::{Pullback, Reduction, ReductionError, Result};

/// A chain of reductions applied left to right.
pub struct Pipeline {
    name: String,
    stages: Vec<Box<dyn Reduction>>,
    source: Option<GroupTag>,
}

/// One resolved stage with its source and target signatures.
pub struct Stage<'a> {
    pub reduction: &'a dyn Reduction,
    pub source: Signature,
    pub target: Signature,
}

pub struct Resolved<'a> {
    pub stages: Vec<Stage<'a>>,
    /// The chain stopped at an instance with no summands.
    pub null: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCertificate {
    pub stage: String,
    pub target_signature: String,
    pub lift: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub pipeline: String,
    pub source_signature: String,
    pub stages: Vec<StageCertificate>,
    pub null: bool,
}

fn at_stage(stage: &str, e: ReductionError) -> ReductionError {
    match e {
        ReductionError::Schema { .. } => e,
        other => ReductionError::schema(stage, other.to_string()),
    }
}

impl Pipeline {
    pub fn new(name: impl Into<String>, stages: Vec<Box<dyn Reduction>>) -> Self {
        Pipeline { name: name.into(), stages, source: None }
    }

    /// Only sources over `group` are accepted.
    pub fn with_source(mut self, group: GroupTag) -> Self {
        self.source = Some(group);
        self
    }

    pub fn stage_names(&self) -> Vec<String> {
        self.stages.iter().map(|s| s.name()).collect()
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn resolve(&self, src: &Signature) -> Result<Resolved<'_>> {
        if let Some(group) = self.source {
            if src.group != group {
                let stage = self.stages.first().map(|s| s.name()).unwrap_or_else(|| self.name.clone());
                return Err(ReductionError::schema(&stage, format!("pipeline {} expects group {group}", self.name)));
            }
        }
        let mut out = Vec::with_capacity(self.stages.len());
        let mut cur = src.clone();
        let mut null = false;
        for r in &self.stages {
            if cur.p() == 0 {
                null = true;
                break;
            }
            let next = r.target_signature(&cur).map_err(|e| at_stage(&r.name(), e))?;
            out.push(Stage { reduction: r.as_ref(), source: cur, target: next.clone() });
            cur = next;
        }
        Ok(Resolved { stages: out, null })
    }

    pub fn certificate(&self, src: &Signature) -> Result<Certificate> {
        let res = self.resolve(src)?;
        Ok(Certificate {
            pipeline: self.name.clone(),
            source_signature: src.to_string(),
            stages: res
                .stages
                .iter()
                .map(|s| StageCertificate {
                    stage: s.reduction.name(),
                    target_signature: s.target.to_string(),
                    lift: s.reduction.describe_lift(),
                })
                .collect(),
            null: res.null,
        })
    }

    /// Every intermediate instance, the source first.
    pub fn trace(&self, x: &Instance) -> Result<Vec<Instance>> {
        let res = self.resolve(&x.signature)?;
        let mut out = vec![x.clone()];
        for s in &res.stages {
            let y = s.reduction.apply(out.last().expect("nonempty")).map_err(|e| at_stage(&s.reduction.name(), e))?;
            out.push(y);
        }
        Ok(out)
    }
}

impl Reduction for Pipeline {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        let res = self.resolve(src)?;
        Ok(res.stages.last().map(|s| s.target.clone()).unwrap_or_else(|| src.clone()))
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        Ok(self.trace(x)?.pop().expect("nonempty"))
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        let res = self.resolve(src)?;
        let mut cur = g.clone();
        for s in &res.stages {
            cur = s.reduction.lift_group(&s.source, &cur).map_err(|e| at_stage(&s.reduction.name(), e))?;
        }
        Ok(cur)
    }

    fn describe_lift(&self) -> String {
        let parts: Vec<String> = self.stages.iter().map(|s| s.describe_lift()).collect();
        if parts.is_empty() {
            "g ↦ g".into()
        } else {
            parts.join(" ∘ ")
        }
    }

    fn has_pullback(&self) -> bool {
        self.stages.iter().all(|s| s.has_pullback())
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let res = self.resolve(src)?;
        let mut cur = Pullback { invariant: g.clone(), c: 0, factor: BigRational::one() };
        for s in &res.stages {
            let next = s.reduction.pullback(&s.source, &cur.invariant)?;
            cur = Pullback { invariant: next.invariant, c: cur.c + next.c, factor: cur.factor * next.factor };
        }
        Ok(cur)
    }

    fn injective_linear(&self) -> bool {
        self.stages.iter().all(|s| s.injective_linear())
    }

    fn polynomial(&self) -> bool {
        self.stages.iter().all(|s| s.polynomial())
    }
}

const STEPS: &[&str] = &[
    "reduce_balance",
    "reduce_pad",
    "reduce_merge_spaces",
    "reduce_split_spaces",
    "reduce_swap_gadget",
    "reduce_collapse_sum",
    "reduce_collapse_sum_deg2",
    "reduce_detuple",
    "reduce_rank_embed",
    "reduce_form_to_gl",
    "reduce_gl_to_form",
    "reduce_gl_to_form_sp",
    "reduce_lower_indices",
    "reduce_cube_pair",
    "reduce_power_space",
    "gi_encode",
    "unitary_lift",
];

pub fn step_names() -> &'static [&'static str] {
    STEPS
}

/// A single reduction with its default parameters.
pub fn step(name: &str) -> Result<Box<dyn Reduction>> {
    Ok(match name {
        "reduce_balance" => Box::new(Balance),
        "reduce_pad" => Box::new(Pad::common()),
        "reduce_merge_spaces" => Box::new(MergeSpaces),
        "reduce_split_spaces" => Box::new(SplitSpaces::all_ones()),
        "reduce_swap_gadget" => Box::new(SwapGadget),
        "reduce_collapse_sum" => Box::new(CollapseSum::two_conj()),
        "reduce_collapse_sum_deg2" => Box::new(CollapseSum::deg2()),
        "reduce_detuple" => Box::new(Detuple::auto()),
        "reduce_rank_embed" => Box::new(RankEmbed),
        "reduce_form_to_gl" => Box::new(FormToGl),
        "reduce_gl_to_form" => Box::new(GlToForm::orthogonal()),
        "reduce_gl_to_form_sp" => Box::new(GlToForm::symplectic()),
        "reduce_lower_indices" => Box::new(LowerIndices),
        "reduce_cube_pair" => Box::new(CubePair),
        "reduce_power_space" => Box::new(PowerSpace),
        "gi_encode" => Box::new(GiEncode),
        "unitary_lift" => Box::new(UnitaryLift),
        _ => return Err(ReductionError::UnknownName(name.into())),
    })
}

const PIPELINES: &[&str] =
    &["peps3", "deg2-pair", "deg2-plus-conj", "x44", "x33-x11", "o33-pair", "o7", "sp33-pair", "sp7", "gi-to-peps"];

pub fn pipeline_names() -> &'static [&'static str] {
    PIPELINES
}

fn peps_prefix() -> Vec<Box<dyn Reduction>> {
    vec![
        Box::new(Balance),
        Box::new(Pad::common()),
        Box::new(MergeSpaces),
        Box::new(SplitSpaces::all_ones()),
        Box::new(Balance),
        Box::new(Pad::common()),
        Box::new(SwapGadget),
        Box::new(Pad::common()),
        Box::new(SplitSpaces::all_ones()),
        Box::new(Balance),
    ]
}

fn cube_chain(skew: bool) -> Vec<Box<dyn Reduction>> {
    let lift: Box<dyn Reduction> = if skew { Box::new(GlToForm::symplectic()) } else { Box::new(GlToForm::orthogonal()) };
    vec![
        Box::new(Pad::uniform(TensorType::single(6, 6))),
        lift,
        Box::new(LowerIndices),
        Box::new(CubePair),
        Box::new(LowerIndices),
    ]
}

/// Named pipeline; the empty name is the identity.
pub fn pipeline(name: &str) -> Result<Pipeline> {
    let p = match name {
        "" => Pipeline::new("identity", vec![]),
        "peps3" => {
            let mut s = peps_prefix();
            s.push(Box::new(CollapseSum::two_conj()));
            s.push(Box::new(Pad::common()));
            Pipeline::new(name, s).with_source(GroupTag::GL)
        }
        "deg2-pair" => {
            let mut s = peps_prefix();
            s.push(Box::new(CollapseSum::deg2()));
            s.push(Box::new(MergeSpaces));
            Pipeline::new(name, s).with_source(GroupTag::GL)
        }
        "deg2-plus-conj" => {
            let mut s = peps_prefix();
            s.push(Box::new(CollapseSum::two_conj()));
            s.push(Box::new(MergeSpaces));
            Pipeline::new(name, s).with_source(GroupTag::GL)
        }
        "x44" => Pipeline::new(name, vec![Box::new(Detuple::auto())]).with_source(GroupTag::GL),
        "x33-x11" => Pipeline::new(name, vec![Box::new(RankEmbed)]).with_source(GroupTag::GL),
        "o33-pair" => Pipeline::new(name, cube_chain(false)).with_source(GroupTag::GL),
        "sp33-pair" => Pipeline::new(name, cube_chain(true)).with_source(GroupTag::GL),
        "o7" => Pipeline::new(name, vec![Box::new(Detuple::auto())]).with_source(GroupTag::O),
        "sp7" => Pipeline::new(name, vec![Box::new(Detuple::auto())]).with_source(GroupTag::Sp),
        "gi-to-peps" => Pipeline::new(
            name,
            vec![Box::new(GiEncode), Box::new(Balance), Box::new(Pad::common()), Box::new(PowerSpace), Box::new(Pad::common())],
        )
        .with_source(GroupTag::Sn),
        _ => return Err(ReductionError::UnknownName(name.into())),
    };
    Ok(p)
}
