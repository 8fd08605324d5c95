//! Integral Hilbert bases of cones `{d ∈ N^p : M d = 0}`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use tensor_core::TensorType;
use thiserror::Error;

pub const DEFAULT_MAX_SUMMANDS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("{p} summands exceeds the cap of {cap}")]
    CapExceeded { p: usize, cap: usize },
    #[error("types over different numbers of spaces")]
    RaggedTypes,
    #[error("completion did not terminate within {0} rounds")]
    Diverged(usize),
}

/// `{d ≥ 0 : M d = 0}` with one row per space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceCone {
    pub p: usize,
    pub rows: Vec<Vec<i64>>,
}

/// Row `i` holds `a_{k,i} − b_{k,i}` for every summand `k`.
pub fn balance_cone(types: &[TensorType]) -> Result<BalanceCone, ConeError> {
    let m = types.first().map_or(0, TensorType::spaces);
    if types.iter().any(|t| t.spaces() != m) {
        return Err(ConeError::RaggedTypes);
    }
    let rows = (0..m).map(|i| types.iter().map(|t| t.contra[i] as i64 - t.co[i] as i64).collect()).collect();
    Ok(BalanceCone { p: types.len(), rows })
}

impl BalanceCone {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        let p = rows.first().map_or(0, Vec::len);
        BalanceCone { p, rows }
    }

    pub fn image(&self, d: &[u64]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(d).map(|(&a, &x)| a * x as i64).sum()).collect()
    }

    pub fn contains(&self, d: &[u64]) -> bool {
        d.len() == self.p && self.image(d).iter().all(|&v| v == 0)
    }

    fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// Basis vectors in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBasis {
    pub vectors: Vec<Vec<u64>>,
}

/// Total degree ascending, then lexicographically descending.
pub fn graded_lex(a: &[u64], b: &[u64]) -> Ordering {
    let (sa, sb): (u64, u64) = (a.iter().sum(), b.iter().sum());
    sa.cmp(&sb).then_with(|| b.cmp(a))
}

fn dominates(v: &[u64], w: &[u64]) -> bool {
    v.iter().zip(w).all(|(a, b)| a >= b)
}

impl HilbertBasis {
    fn from_set(set: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut vectors: Vec<Vec<u64>> = set.into_iter().collect();
        vectors.sort_by(|a, b| graded_lex(a, b));
        HilbertBasis { vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Nonnegative coefficients `c` with `Σ c_ℓ h_ℓ = d`, if any.
    pub fn decompose(&self, d: &[u64]) -> Option<Vec<u64>> {
        fn go(basis: &[Vec<u64>], l: usize, rest: &mut Vec<u64>, coef: &mut Vec<u64>) -> bool {
            if rest.iter().all(|&x| x == 0) {
                return true;
            }
            if l == basis.len() {
                return false;
            }
            let h = &basis[l];
            let max = h.iter().zip(rest.iter()).filter(|(a, _)| **a > 0).map(|(a, r)| r / a).min().unwrap_or(0);
            for c in (0..=max).rev() {
                for (r, a) in rest.iter_mut().zip(h) {
                    *r -= c * a;
                }
                coef[l] = c;
                if go(basis, l + 1, rest, coef) {
                    return true;
                }
                for (r, a) in rest.iter_mut().zip(h) {
                    *r += c * a;
                }
            }
            coef[l] = 0;
            false
        }
        let mut rest = d.to_vec();
        let mut coef = vec![0; self.vectors.len()];
        go(&self.vectors, 0, &mut rest, &mut coef).then_some(coef)
    }
}

impl fmt::Display for HilbertBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vectors {
            let parts: Vec<String> = v.iter().map(u64::to_string).collect();
            writeln!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

pub fn hilbert_basis(cone: &BalanceCone) -> Result<HilbertBasis, ConeError> {
    hilbert_basis_capped(cone, DEFAULT_MAX_SUMMANDS)
}

/// Completion: grow candidates by unit vectors that decrease the defect `‖M v‖`, keep solutions,
/// prune anything dominating a solution.
pub fn hilbert_basis_capped(cone: &BalanceCone, cap: usize) -> Result<HilbertBasis, ConeError> {
    let p = cone.p;
    if p > cap {
        return Err(ConeError::CapExceeded { p, cap });
    }
    let cols: Vec<Vec<i64>> = (0..p).map(|j| cone.column(j)).collect();
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut frontier: BTreeSet<Vec<u64>> = (0..p)
        .map(|j| {
            let mut e = vec![0; p];
            e[j] = 1;
            e
        })
        .collect();
    let max_rounds = 10_000;
    for _ in 0..max_rounds {
        if frontier.is_empty() {
            return Ok(HilbertBasis::from_set(basis));
        }
        let mut next = BTreeSet::new();
        let mut fresh = Vec::new();
        for v in &frontier {
            let mv = cone.image(v);
            if mv.iter().all(|&x| x == 0) {
                fresh.push(v.clone());
                continue;
            }
            for (j, col) in cols.iter().enumerate() {
                if dot(&mv, col) < 0 {
                    let mut w = v.clone();
                    w[j] += 1;
                    next.insert(w);
                }
            }
        }
        basis.extend(fresh);
        next.retain(|w| !basis.iter().any(|b| dominates(w, b)));
        frontier = next;
    }
    Err(ConeError::Diverged(max_rounds))
}

/// Componentwise-minimal nonzero solutions with `Σ d ≤ bound`.
pub fn brute_force_hilbert(cone: &BalanceCone, bound: u64) -> HilbertBasis {
    fn all(p: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>, cone: &BalanceCone) {
        if cur.len() == p {
            if cur.iter().any(|&x| x > 0) && cone.contains(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=left {
            cur.push(x);
            all(p, left - x, cur, out, cone);
            cur.pop();
        }
    }
    let mut sols = Vec::new();
    all(cone.p, bound, &mut Vec::new(), &mut sols, cone);
    let minimal: Vec<Vec<u64>> =
        sols.iter().filter(|v| !sols.iter().any(|w| w != *v && dominates(v, w))).cloned().collect();
    HilbertBasis::from_set(minimal)
}

/// All nonzero solutions with `Σ d ≤ bound`.
pub fn bounded_solutions(cone: &BalanceCone, bound: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(cur) = stack.pop() {
        let used: u64 = cur.iter().sum();
        if cur.len() == cone.p {
            if used > 0 && cone.contains(&cur) {
                out.push(cur);
            }
            continue;
        }
        for x in 0..=bound - used {
            let mut next = cur.clone();
            next.push(x);
            stack.push(next);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_cone() {
        let types = [TensorType::single(2, 0), TensorType::single(3, 0), TensorType::single(0, 2)];
        let cone = balance_cone(&types).unwrap();
        assert_eq!(cone.rows, vec![vec![2, 3, -2]]);
        let hb = hilbert_basis(&cone).unwrap();
        assert_eq!(hb.vectors, vec![vec![1, 0, 1], vec![0, 2, 3]]);
        assert_eq!(brute_force_hilbert(&cone, 6), hb);
    }

    #[test]
    fn zero_cone_gives_units_in_order() {
        let cone = BalanceCone::new(vec![vec![0, 0, 0]]);
        assert_eq!(hilbert_basis(&cone).unwrap().vectors, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(brute_force_hilbert(&cone, 4).vectors.len(), 3);
    }

    #[test]
    fn strict_cone_is_empty() {
        let cone = balance_cone(&[TensorType::single(1, 0)]).unwrap();
        assert_eq!(cone.rows, vec![vec![1]]);
        assert!(hilbert_basis(&cone).unwrap().is_empty());
        assert!(brute_force_hilbert(&cone, 10).is_empty());
    }

    #[test]
    fn opposite_pair() {
        let cone = BalanceCone::new(vec![vec![1, -1]]);
        assert_eq!(hilbert_basis(&cone).unwrap().vectors, vec![vec![1, 1]]);
    }

    #[test]
    fn decompose_over_basis() {
        let hb = HilbertBasis { vectors: vec![vec![1, 0, 1], vec![0, 2, 3]] };
        assert_eq!(hb.decompose(&[2, 2, 5]), Some(vec![2, 1]));
        assert_eq!(hb.decompose(&[0, 1, 1]), None);
    }

    #[test]
    fn cap() {
        let cone = BalanceCone::new(vec![vec![0; 13]]);
        assert_eq!(hilbert_basis(&cone), Err(ConeError::CapExceeded { p: 13, cap: 12 }));
    }
}
