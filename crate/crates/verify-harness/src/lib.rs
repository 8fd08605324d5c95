//! Randomized and exhaustive checks for the reduction catalog.
//!
//! Every check is exact and reproducible from a 64-bit seed: trial `t` draws from a ChaCha8
//! generator seeded with `splitmix64(seed + t)`.

mod checks;
mod error;
mod fixtures;
mod gi;
mod random;

pub use checks::{
    check_equivariance, check_homomorphism, check_injectivity, check_pullback, random_wiring, sparse_rank, Check,
    CheckReport, Failure,
};
pub use error::HarnessError;
pub use fixtures::{fixtures, reduction_names, Fixture, WiringPlan, CORRUPTED};
pub use gi::{gi_roundtrip, GiVerdict, PEPS_FINGERPRINT_SLOTS};
pub use random::{
    random_group_element, random_instance, random_perm, random_scalar, random_tensor, splitmix64, trial_rng, trial_seed,
};

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Which checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Equivariance,
    Pullback,
    Injectivity,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "equivariance" => Ok(Suite::Equivariance),
            "pullback" => Ok(Suite::Pullback),
            "injectivity" => Ok(Suite::Injectivity),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

/// Runs `suite` on every fixture of `name`; pullback uses `trials` wirings and `trials` instances.
pub fn run_suite(suite: Suite, name: &str, dims: &[usize], trials: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for fx in fixtures(name)? {
        if trials == 0 {
            continue;
        }
        if matches!(suite, Suite::Equivariance | Suite::All) {
            out.push(check_equivariance(&fx, dims, trials, seed)?);
            out.push(check_homomorphism(&fx, dims, trials, seed)?);
        }
        if matches!(suite, Suite::Pullback | Suite::All) && fx.reduction.has_pullback() {
            out.push(check_pullback(&fx, dims, trials, trials, seed)?);
        }
        if matches!(suite, Suite::Injectivity | Suite::All) && fx.reduction.injective_linear() {
            out.push(check_injectivity(&fx, dims)?);
        }
    }
    Ok(out)
}
