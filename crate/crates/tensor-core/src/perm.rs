use std::fmt;

use crate::error::TensorError;

/// Permutation of `0..n` in one-line notation: `p.apply(i)` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self, TensorError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(TensorError::InvalidPerm(images));
            }
            seen[v] = true;
        }
        Ok(Perm(images))
    }

    /// From 1-based one-line notation, e.g. `[1, 5, 2, 6, 3, 7, 4, 8]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self, TensorError> {
        if images.contains(&0) {
            return Err(TensorError::InvalidPerm(images.to_vec()));
        }
        Perm::new(images.iter().map(|&v| v - 1).collect())
    }

    /// Transposition of `a` and `b` in `S_n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Perm(v)
    }

    /// The cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Self {
        Perm((0..n).map(|i| (i + 1) % n.max(1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Perm(inv)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// Permutation in the `block_count × block_size` layout that moves whole blocks by
    /// `self` and keeps the order inside each block.
    pub fn blocks(&self, block_size: usize) -> Perm {
        let mut v = Vec::with_capacity(self.len() * block_size);
        for b in 0..self.len() {
            for j in 0..block_size {
                v.push(self.0[b] * block_size + j);
            }
        }
        Perm(v)
    }

    /// Permutation acting on each of `count` consecutive blocks by `self`.
    pub fn within_blocks(&self, count: usize) -> Perm {
        let s = self.len();
        let mut v = Vec::with_capacity(count * s);
        for b in 0..count {
            for j in 0..s {
                v.push(b * s + self.0[j]);
            }
        }
        Perm(v)
    }

    /// All permutations of `0..n` in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next permutation
            let Some(k) = (1..n).rev().find(|&k| cur[k - 1] < cur[k]) else {
                break;
            };
            let k = k - 1;
            let l = (k + 1..n).rev().find(|&l| cur[k] < cur[l]).unwrap();
            cur.swap(k, l);
            cur[k + 1..].reverse();
        }
        out
    }

    /// Sequence of transpositions `t_1, …, t_l` with `self = t_l ∘ … ∘ t_1`.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        // content[q] = original position currently sitting at q
        let mut content: Vec<usize> = (0..n).collect();
        let mut where_is: Vec<usize> = (0..n).collect();
        let inv = self.inverse();
        let mut out = Vec::new();
        for q in 0..n {
            let want = inv.apply(q);
            let r = where_is[want];
            if r != q {
                out.push((q, r));
                let a = content[q];
                content.swap(q, r);
                where_is[a] = r;
                where_is[want] = q;
            }
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Perm {
    /// 1-based one-line notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
