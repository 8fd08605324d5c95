use std::collections::BTreeSet;

use itertools::Itertools;
use tensor_core::{Perm, Scalar, TensorType};

use crate::error::InvariantError;
use crate::fundamentals::{fundamental_kinds, fundamental_tensors};
use crate::invariant::{fundamental_types, node_types, ContractionInvariant, Layout};
use crate::signature::{Instance, Signature};
use crate::Result;

pub const DEFAULT_MAX_SLOTS: usize = 8;
pub const DEFAULT_WIRING_BUDGET: usize = 2_000_000;

/// Above this many relabelings only exact duplicates are merged.
const MAX_RELABELINGS: usize = 5040;

struct Kind {
    ttype: TensorType,
    contra_sym: bool,
    co_sym: bool,
}

fn kinds(sig: &Signature) -> Vec<Kind> {
    let mut out: Vec<Kind> =
        sig.types.iter().map(|t| Kind { ttype: t.clone(), contra_sym: false, co_sym: false }).collect();
    for k in fundamental_kinds(sig.group, sig.m()) {
        out.push(Kind { ttype: k.ttype(sig.m()), contra_sym: k.contra_symmetric(), co_sym: k.co_symmetric() });
    }
    out
}

/// Balanced multiplicity vectors with at most `cap` contravariant slots per space.
fn multiplicities(kinds: &[Kind], m: usize, cap: usize) -> Vec<Vec<usize>> {
    fn go(kinds: &[Kind], k: usize, contra: &mut [usize], co: &mut [usize], cur: &mut Vec<usize>, cap: usize, out: &mut Vec<Vec<usize>>) {
        if k == kinds.len() {
            if contra == co {
                out.push(cur.clone());
            }
            return;
        }
        let t = &kinds[k].ttype;
        let empty = t.total_factors() == 0;
        let mut mult = 0;
        loop {
            cur.push(mult);
            go(kinds, k + 1, contra, co, cur, cap, out);
            cur.pop();
            if empty {
                break;
            }
            let fits = (0..contra.len()).all(|i| contra[i] + t.contra[i] <= cap && co[i] + t.co[i] <= cap);
            if !fits {
                break;
            }
            for i in 0..contra.len() {
                contra[i] += t.contra[i];
                co[i] += t.co[i];
            }
            mult += 1;
        }
        for i in 0..contra.len() {
            contra[i] -= mult * t.contra[i];
            co[i] -= mult * t.co[i];
        }
    }
    let mut out = Vec::new();
    go(kinds, 0, &mut vec![0; m], &mut vec![0; m], &mut Vec::new(), cap, &mut out);
    let slots = |v: &Vec<usize>| -> usize { v.iter().zip(kinds).map(|(&c, k)| c * k.ttype.contra.iter().sum::<usize>()).sum() };
    out.sort_by(|a, b| slots(a).cmp(&slots(b)).then_with(|| a.cmp(b)));
    out
}

struct Search<'a> {
    layout: &'a Layout,
    class: Vec<usize>,
    class_members: Vec<Vec<usize>>,
    contra_sym: Vec<bool>,
    co_sym: Vec<bool>,
    touched: Vec<usize>,
    used: Vec<Vec<bool>>,
    wiring: Vec<Vec<usize>>,
    budget: usize,
    leaves: usize,
    found: BTreeSet<Vec<Vec<usize>>>,
    relabelings: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn first_untouched(&self, w: usize) -> bool {
        self.class_members[self.class[w]].iter().take_while(|&&v| v < w).all(|&v| self.touched[v] > 0)
    }

    fn go(&mut self, i: usize, p: usize) -> Result<()> {
        let m = self.layout.m();
        if i == m {
            self.leaves += 1;
            if self.leaves > self.budget {
                return Err(InvariantError::CapExceeded(format!("more than {} wirings", self.budget)));
            }
            let word = self.canonical();
            self.found.insert(word);
            return Ok(());
        }
        if p == self.layout.contra_slots[i].len() {
            return self.go(i + 1, 0);
        }
        let (u, pos) = self.layout.contra_slots[i][p];
        self.touched[u] += 1;
        let lower = if self.contra_sym[u] && pos > 0 { self.wiring[i][p - 1] + 1 } else { 0 };
        for c in lower..self.layout.co_slots[i].len() {
            if self.used[i][c] {
                continue;
            }
            let (w, q) = self.layout.co_slots[i][c];
            if self.touched[w] == 0 && !self.first_untouched(w) {
                continue;
            }
            if self.co_sym[w] && (0..q).any(|r| !self.used[i][self.layout.co_base[i][w] + r]) {
                continue;
            }
            self.used[i][c] = true;
            self.touched[w] += 1;
            self.wiring[i][p] = c;
            let r = self.go(i, p + 1);
            self.touched[w] -= 1;
            self.used[i][c] = false;
            r?;
        }
        self.touched[u] -= 1;
        Ok(())
    }

    fn relabel(&self, nu: &[usize]) -> Vec<Vec<usize>> {
        let l = self.layout;
        (0..l.m())
            .map(|i| {
                let mut img = vec![0; self.wiring[i].len()];
                for (p, &c) in self.wiring[i].iter().enumerate() {
                    let (u, pos) = l.contra_slots[i][p];
                    let (w, q) = l.co_slots[i][c];
                    img[l.contra_base[i][nu[u]] + pos] = l.co_base[i][nu[w]] + q;
                }
                img
            })
            .collect()
    }

    fn canonical(&self) -> Vec<Vec<usize>> {
        if self.relabelings.is_empty() {
            return self.wiring.clone();
        }
        self.relabelings.iter().map(|nu| self.relabel(nu)).min().unwrap()
    }
}

fn relabelings(class_members: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let size: usize = class_members.iter().map(|c| (1..=c.len()).product::<usize>()).product();
    if size > MAX_RELABELINGS || size == 1 {
        return Vec::new();
    }
    class_members
        .iter()
        .map(|c| Perm::all(c.len()).into_iter().map(move |p| (c.clone(), p)))
        .multi_cartesian_product()
        .map(|choice| {
            let mut nu: Vec<usize> = (0..n).collect();
            for (members, p) in choice {
                for (a, &u) in members.iter().enumerate() {
                    nu[u] = members[p.apply(a)];
                }
            }
            nu
        })
        .collect()
}

fn wirings_for(sig: &Signature, kinds: &[Kind], mult: &[usize], budget: usize) -> Result<Vec<ContractionInvariant>> {
    let p = sig.p();
    let ftypes = fundamental_types(sig);
    let (d, f) = mult.split_at(p);
    let layout = Layout::new(node_types(&sig.types, &ftypes, d, f), sig.m());
    let mut class = Vec::new();
    let mut class_members: Vec<Vec<usize>> = Vec::new();
    let mut contra_sym = Vec::new();
    let mut co_sym = Vec::new();
    for (k, &c) in mult.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let id = class_members.len();
        let start = class.len();
        class_members.push((start..start + c).collect());
        for _ in 0..c {
            class.push(id);
            contra_sym.push(kinds[k].contra_sym);
            co_sym.push(kinds[k].co_sym);
        }
    }
    let n = class.len();
    let relabelings = relabelings(&class_members, n);
    let mut s = Search {
        layout: &layout,
        class,
        class_members,
        contra_sym,
        co_sym,
        touched: vec![0; n],
        used: (0..sig.m()).map(|i| vec![false; layout.co_slots[i].len()]).collect(),
        wiring: (0..sig.m()).map(|i| vec![0; layout.contra_slots[i].len()]).collect(),
        budget,
        leaves: 0,
        found: BTreeSet::new(),
        relabelings,
    };
    s.go(0, 0)?;
    Ok(s.found
        .into_iter()
        .map(|w| ContractionInvariant {
            degrees: d.to_vec(),
            fundamentals: f.to_vec(),
            wiring: w.into_iter().map(|img| Perm::new(img).expect("bijective wiring")).collect(),
        })
        .collect())
}

pub fn enumerate_invariants(sig: &Signature, max_slots: usize) -> Result<Vec<ContractionInvariant>> {
    enumerate_invariants_with_budget(sig, max_slots, DEFAULT_WIRING_BUDGET)
}

/// All wirings with at most `max_slots` contravariant slots per space, up to relabeling of copies,
/// in canonical order: slot count, multiplicity vector, wiring word.
pub fn enumerate_invariants_with_budget(sig: &Signature, max_slots: usize, budget: usize) -> Result<Vec<ContractionInvariant>> {
    let ks = kinds(sig);
    let mut out = Vec::new();
    let mut spent = 0;
    for mult in multiplicities(&ks, sig.m(), max_slots) {
        let found = wirings_for(sig, &ks, &mult, budget.saturating_sub(spent))?;
        spent += found.len();
        out.extend(found);
    }
    Ok(out)
}

/// Every wiring for fixed multiplicities, without symmetry reduction.
pub fn enumerate_raw(sig: &Signature, degrees: &[usize], fundamentals: &[usize]) -> Result<Vec<ContractionInvariant>> {
    let ftypes = fundamental_types(sig);
    let layout = Layout::new(node_types(&sig.types, &ftypes, degrees, fundamentals), sig.m());
    if !layout.is_balanced() {
        return Err(InvariantError::Unbalanced("multiplicities".into()));
    }
    let per_space: Vec<Vec<Perm>> = (0..sig.m()).map(|i| Perm::all(layout.contra_slots[i].len())).collect();
    Ok(per_space
        .into_iter()
        .multi_cartesian_product()
        .map(|wiring| ContractionInvariant { degrees: degrees.to_vec(), fundamentals: fundamentals.to_vec(), wiring })
        .collect())
}

/// Values of the enumerated invariants, in enumeration order.
pub fn fingerprint(x: &Instance, max_slots: usize) -> Result<Vec<Scalar>> {
    let fund = fundamental_tensors(&x.signature)?;
    enumerate_invariants(&x.signature, max_slots)?
        .iter()
        .map(|inv| inv.evaluate_on(&x.signature, &x.tensors, &fund))
        .collect()
}

/// First enumerated invariant separating `x` and `y`; a witness proves they are not closure equivalent.
pub fn distinguish(x: &Instance, y: &Instance, max_slots: usize) -> Result<Option<ContractionInvariant>> {
    if x.signature != y.signature {
        return Err(InvariantError::SignatureMismatch(format!("{} vs {}", x.signature, y.signature)));
    }
    let fx = fundamental_tensors(&x.signature)?;
    for inv in enumerate_invariants(&x.signature, max_slots)? {
        let a = inv.evaluate_on(&x.signature, &x.tensors, &fx)?;
        let b = inv.evaluate_on(&y.signature, &y.tensors, &fx)?;
        if a != b {
            return Ok(Some(inv));
        }
    }
    Ok(None)
}
