use std::collections::HashMap;
use std::fmt;

use cone_hilbert::{balance_cone, hilbert_basis};
use invariant_engine::{evaluate, fundamental_kinds, ContractionInvariant, FundamentalKind, Instance, Signature};
use rand::Rng;
use tensor_core::{GroupTag, MixedTensor, Scalar};

use crate::fixtures::{Fixture, WiringPlan};
use crate::random::{random_group_element, random_instance, random_perm, trial_rng, trial_seed};
use crate::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Equivariance,
    Homomorphism,
    Pullback,
    Injectivity,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Equivariance => "equivariance",
            Check::Homomorphism => "homomorphism",
            Check::Pullback => "pullback",
            Check::Injectivity => "injectivity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub trial: u64,
    pub dim: usize,
    /// Seed of the trial's generator.
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: Check,
    pub reduction: String,
    pub label: String,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub trials: usize,
    pub failures: Vec<Failure>,
    /// Set when the check does not apply to the reduction.
    pub skipped: Option<String>,
}

impl CheckReport {
    fn new(check: Check, fx: &Fixture, dims: &[usize], seed: u64) -> Self {
        CheckReport {
            check,
            reduction: fx.name.clone(),
            label: fx.label.into(),
            dims: dims.to_vec(),
            seed,
            trials: 0,
            failures: Vec::new(),
            skipped: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = format!("{} {} [{}] dims {:?}", self.check, self.reduction, self.label, self.dims);
        if let Some(why) = &self.skipped {
            return write!(f, "SKIP {head}: {why}");
        }
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {head}: {} trials, {} failures, seed {}", self.trials, self.failures.len(), self.seed)?;
        for e in &self.failures {
            write!(f, "\n  trial {} dim {} seed {:#018x}: {}", e.trial, e.dim, e.seed, e.detail)?;
        }
        Ok(())
    }
}

fn dim_of(dims: &[usize], trial: usize) -> usize {
    dims[trial % dims.len()]
}

/// `apply(g·x) = lift(g)·apply(x)` on random pairs.
pub fn check_equivariance(fx: &Fixture, dims: &[usize], trials: usize, seed: u64) -> Result<CheckReport> {
    let dims = fx.dims(dims);
    let mut rep = CheckReport::new(Check::Equivariance, fx, &dims, seed);
    for trial in 0..trials {
        let n = dim_of(&dims, trial);
        let src = fx.source(n)?;
        let mut rng = trial_rng(seed, trial as u64);
        let x = random_instance(&mut rng, &src)?;
        let g = random_group_element(&mut rng, &src)?;
        let r = &fx.reduction;
        let lhs = r.apply(&x.apply_group(&g)?)?;
        let rhs = r.apply(&x)?.apply_group(&r.lift_group(&src, &g)?)?;
        rep.trials += 1;
        if lhs != rhs {
            rep.failures.push(Failure {
                trial: trial as u64,
                dim: n,
                seed: trial_seed(seed, trial as u64),
                detail: "apply(g·x) differs from lift(g)·apply(x)".into(),
            });
        }
    }
    Ok(rep)
}

/// `lift(g)·lift(h) = lift(g·h)`.
pub fn check_homomorphism(fx: &Fixture, dims: &[usize], trials: usize, seed: u64) -> Result<CheckReport> {
    let dims = fx.dims(dims);
    let mut rep = CheckReport::new(Check::Homomorphism, fx, &dims, seed);
    for trial in 0..trials {
        let n = dim_of(&dims, trial);
        let src = fx.source(n)?;
        let mut rng = trial_rng(seed, trial as u64);
        let g = random_group_element(&mut rng, &src)?;
        let h = random_group_element(&mut rng, &src)?;
        let r = &fx.reduction;
        let lhs = r.lift_group(&src, &g)?.compose(&r.lift_group(&src, &h)?)?;
        let rhs = r.lift_group(&src, &g.compose(&h)?)?;
        rep.trials += 1;
        if lhs.matrices() != rhs.matrices() {
            rep.failures.push(Failure {
                trial: trial as u64,
                dim: n,
                seed: trial_seed(seed, trial as u64),
                detail: "lift is not multiplicative".into(),
            });
        }
    }
    Ok(rep)
}

/// Random closed wiring on `sig`, or `None` if nothing fits the plan.
pub fn random_wiring<R: Rng>(rng: &mut R, sig: &Signature, plan: WiringPlan) -> Result<Option<ContractionInvariant>> {
    let m = sig.m();
    let kinds = fundamental_kinds(sig.group, m);
    let (max, degrees) = match plan {
        WiringPlan::DegreeOne => (usize::MAX, Some(vec![1; sig.p()])),
        WiringPlan::Slots(k) => (k, None),
    };
    for _ in 0..64 {
        let d = match &degrees {
            Some(d) => d.clone(),
            None => random_degrees(rng, sig, max)?,
        };
        let mut f = vec![0usize; kinds.len()];
        let mut ok = true;
        let mut slots = vec![0usize; m];
        for i in 0..m {
            let a: usize = sig.types.iter().zip(&d).map(|(t, &k)| t.contra[i] * k).sum();
            let b: usize = sig.types.iter().zip(&d).map(|(t, &k)| t.co[i] * k).sum();
            let pos = |k: FundamentalKind| kinds.iter().position(|&x| x == k);
            match sig.group {
                GroupTag::O | GroupTag::Sp => {
                    if (a + b) % 2 == 1 {
                        ok = false;
                        break;
                    }
                    let (g, gb) = (pos(FundamentalKind::Form(i)).unwrap(), pos(FundamentalKind::DualForm(i)).unwrap());
                    if a >= b {
                        f[g] = (a - b) / 2;
                    } else {
                        f[gb] = (b - a) / 2;
                    }
                    if plan != WiringPlan::DegreeOne && a.max(b) + 2 <= max && rng.gen_bool(0.3) {
                        f[g] += 1;
                        f[gb] += 1;
                    }
                    slots[i] = a + 2 * f[gb];
                }
                GroupTag::Sn => {
                    let (h, g) = (pos(FundamentalKind::Cube(i)).unwrap(), pos(FundamentalKind::Diagonal(i)).unwrap());
                    let mut c = (0..6).find(|&c| a + 3 * c >= b && (a + 3 * c - b).is_multiple_of(2)).unwrap();
                    if a + 3 * (c + 2) <= max && rng.gen_bool(0.3) {
                        c += 2;
                    }
                    f[h] = c;
                    f[g] = (a + 3 * c - b) / 2;
                    slots[i] = a + 3 * c;
                }
                GroupTag::GL | GroupTag::U => {
                    if a != b {
                        ok = false;
                        break;
                    }
                    slots[i] = a;
                }
            }
            if slots[i] > max {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let wiring = slots.iter().map(|&k| random_perm(rng, k)).collect();
        return Ok(Some(ContractionInvariant::new(sig, d, f, wiring)?));
    }
    Ok(None)
}

fn random_degrees<R: Rng>(rng: &mut R, sig: &Signature, max: usize) -> Result<Vec<usize>> {
    let m = sig.m();
    let gens: Vec<Vec<u64>> = match sig.group {
        GroupTag::GL | GroupTag::U => {
            hilbert_basis(&balance_cone(&sig.types).map_err(reduction_catalog::ReductionError::from)?)
                .map_err(reduction_catalog::ReductionError::from)?
                .vectors
        }
        _ => (0..sig.p()).map(|k| (0..sig.p()).map(|j| u64::from(j == k)).collect()).collect(),
    };
    let mut d = vec![0usize; sig.p()];
    if gens.is_empty() {
        return Ok(d);
    }
    let load = |d: &[usize], i: usize| -> usize {
        sig.types.iter().zip(d).map(|(t, &k)| t.contra[i].max(t.co[i]) * k).sum::<usize>()
    };
    let steps = rng.gen_range(1..=4);
    for _ in 0..steps {
        let v = &gens[rng.gen_range(0..gens.len())];
        let next: Vec<usize> = d.iter().zip(v).map(|(&a, &b)| a + b as usize).collect();
        if (0..m).all(|i| load(&next, i) <= max) {
            d = next;
        }
    }
    Ok(d)
}

/// `evaluate(F, apply(x)) = factor · evaluate(G, x)` for random wirings `G` and instances `x`.
pub fn check_pullback(fx: &Fixture, dims: &[usize], wirings: usize, instances: usize, seed: u64) -> Result<CheckReport> {
    let dims = fx.dims(dims);
    let mut rep = CheckReport::new(Check::Pullback, fx, &dims, seed);
    let r = &fx.reduction;
    if !r.has_pullback() {
        rep.skipped = Some("no pullback witness".into());
        return Ok(rep);
    }
    for &n in &dims {
        let src = fx.source(n)?;
        let base = seed.wrapping_add((n as u64) << 32);
        let mut pairs: Vec<(Instance, Instance)> = Vec::with_capacity(instances);
        for k in 0..instances {
            let mut rng = trial_rng(base, (wirings + k) as u64);
            let x = random_instance(&mut rng, &src)?;
            let y = r.apply(&x)?;
            pairs.push((x, y));
        }
        for w in 0..wirings {
            let trial = w as u64;
            let mut rng = trial_rng(base, trial);
            let Some(g) = random_wiring(&mut rng, &src, fx.wiring)? else {
                continue;
            };
            let pb = r.pullback(&src, &g)?;
            rep.trials += 1;
            for (k, (x, y)) in pairs.iter().enumerate() {
                let lhs = evaluate(&pb.invariant, y)?;
                let rhs = &Scalar::from(pb.factor.clone()) * &evaluate(&g, x)?;
                if lhs != rhs {
                    rep.failures.push(Failure {
                        trial,
                        dim: n,
                        seed: trial_seed(base, trial),
                        detail: format!("G = {g}, instance {k}: F(α(x)) = {lhs}, factor·G(x) = {rhs}"),
                    });
                    break;
                }
            }
        }
    }
    Ok(rep)
}

/// Exact rank of sparse vectors by incremental elimination.
pub fn sparse_rank(vectors: impl IntoIterator<Item = HashMap<usize, Scalar>>) -> usize {
    let mut pivots: HashMap<usize, HashMap<usize, Scalar>> = HashMap::new();
    let mut rank = 0;
    for mut v in vectors {
        v.retain(|_, s| !s.is_zero());
        loop {
            let Some(&lead) = v.keys().filter(|c| pivots.contains_key(c)).min() else {
                break;
            };
            let p = &pivots[&lead];
            let coef = &v[&lead] * &p[&lead].inv().expect("pivot nonzero");
            for (&c, s) in p {
                let e = v.entry(c).or_default();
                *e = &*e - &(&coef * s);
            }
            v.retain(|_, s| !s.is_zero());
        }
        if let Some(&lead) = v.keys().min() {
            pivots.insert(lead, v);
            rank += 1;
        }
    }
    rank
}

fn unit_tensors(src: &Signature) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for (k, ty) in src.types.iter().enumerate() {
        let zero = MixedTensor::zero(&src.spaces, ty.clone(), src.field)?;
        let count: u64 = zero.factor_dims().iter().map(|&d| d as u64).product();
        for key in 0..count {
            let idx = zero.decode(key);
            let mut tensors: Vec<MixedTensor> = src
                .types
                .iter()
                .map(|t| MixedTensor::zero(&src.spaces, t.clone(), src.field))
                .collect::<std::result::Result<_, _>>()?;
            tensors[k] = MixedTensor::from_entries(&src.spaces, ty.clone(), src.field, [(idx, Scalar::one())])?;
            out.push(Instance::new(src.clone(), tensors)?);
        }
    }
    Ok(out)
}

fn flatten(y: &Instance, keys: &mut HashMap<(usize, u64), usize>) -> HashMap<usize, Scalar> {
    let mut v = HashMap::new();
    for (k, t) in y.tensors.iter().enumerate() {
        for (key, s) in t.raw_entries() {
            let next = keys.len();
            let col = *keys.entry((k, key)).or_insert(next);
            v.insert(col, s.clone());
        }
    }
    v
}

/// Full rank of `apply` on the monomial basis of the source.
pub fn check_injectivity(fx: &Fixture, dims: &[usize]) -> Result<CheckReport> {
    let dims = fx.dims(dims);
    let mut rep = CheckReport::new(Check::Injectivity, fx, &dims, 0);
    let r = &fx.reduction;
    if !r.injective_linear() {
        return Err(HarnessError::MissingFlag(fx.name.clone(), "injective-linear"));
    }
    for (trial, &n) in dims.iter().enumerate() {
        let src = fx.source(n)?;
        let basis = unit_tensors(&src)?;
        let mut keys = HashMap::new();
        let mut vectors = Vec::with_capacity(basis.len());
        for e in &basis {
            vectors.push(flatten(&r.apply(e)?, &mut keys));
        }
        let rank = sparse_rank(vectors);
        rep.trials += 1;
        if rank != basis.len() {
            rep.failures.push(Failure {
                trial: trial as u64,
                dim: n,
                seed: 0,
                detail: format!("rank {rank} on a source of dimension {}", basis.len()),
            });
        }
    }
    Ok(rep)
}
