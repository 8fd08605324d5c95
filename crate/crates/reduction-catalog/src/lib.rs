//! Named reductions between tensor tuple problems and the pipelines composed from them.
//!
//! Each reduction maps instances, lifts group elements, and where possible turns a source
//! contraction invariant `G` into a target invariant `F` with `F(α(x)) = factor · G(x)`.

mod error;
mod forms;
mod gi;
mod gl;
mod pipeline;
mod rewrite;
mod unitary;
mod util;

use invariant_engine::{ContractionInvariant, Instance, Signature};
use num_rational::BigRational;
use tensor_core::GroupElement;

pub use error::ReductionError;
pub use forms::{CubePair, FormToGl, GlToForm, LowerIndices};
pub use gi::{gi_encode, GiEncode, GiMode, Graph};
pub use gl::{Balance, CollapseSum, Detuple, MergeSpaces, Pad, PowerSpace, RankEmbed, SplitSpaces, SwapGadget};
pub use pipeline::{
    pipeline, pipeline_names, step, step_names, Certificate, Pipeline, Resolved, Stage, StageCertificate,
};
pub use unitary::UnitaryLift;
pub use util::{cube_form, hyperbolic_form};

pub type Result<T> = std::result::Result<T, ReductionError>;

/// Target invariant of a pullback: `evaluate(invariant, α(x)) = factor · evaluate(G, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub invariant: ContractionInvariant,
    /// Identity loops and form traces absorbed into `factor`.
    pub c: u32,
    pub factor: BigRational,
}

pub trait Reduction: Send + Sync {
    fn name(&self) -> String;

    /// Fails with [`ReductionError::Schema`] when `src` is outside the source schema.
    fn target_signature(&self, src: &Signature) -> Result<Signature>;

    fn apply(&self, x: &Instance) -> Result<Instance>;

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement>;

    fn describe_lift(&self) -> String;

    fn has_pullback(&self) -> bool {
        false
    }

    fn pullback(&self, src: &Signature, _g: &ContractionInvariant) -> Result<Pullback> {
        let _ = src;
        Err(ReductionError::NoWitness(self.name()))
    }

    fn injective_linear(&self) -> bool {
        false
    }

    /// False for conjugate-linear maps.
    fn polynomial(&self) -> bool {
        true
    }
}
