use std::collections::HashMap;

use crate::error::TensorError;
use crate::scalar::Scalar;
use crate::tensor::MixedTensor;
use crate::Result;

/// Wire from contravariant position `contra` of `from` to covariant position `co` of `to`,
/// both within the blocks of `space`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NetworkEdge {
    pub space: usize,
    pub from: usize,
    pub contra: usize,
    pub to: usize,
    pub co: usize,
}

/// Closed network of tensors evaluated to a scalar by greedy pairwise contraction.
#[derive(Debug, Clone, Default)]
pub struct TensorNetwork<'a> {
    nodes: Vec<&'a MixedTensor>,
    edges: Vec<NetworkEdge>,
}

struct Legs {
    edges: Vec<usize>,
    entries: Vec<(Vec<u32>, Scalar)>,
}

impl Legs {
    fn is_scalar(&self) -> bool {
        self.edges.is_empty()
    }

    fn value(&self) -> Scalar {
        self.entries.iter().fold(Scalar::zero(), |acc, (_, v)| &acc + v)
    }
}

impl<'a> TensorNetwork<'a> {
    pub fn new() -> Self {
        TensorNetwork { nodes: Vec::new(), edges: Vec::new() }
    }

    pub fn add_node(&mut self, t: &'a MixedTensor) -> usize {
        self.nodes.push(t);
        self.nodes.len() - 1
    }

    pub fn connect(&mut self, edge: NetworkEdge) {
        self.edges.push(edge);
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Maps every factor of every node to its edge id; errors unless each slot is used exactly once.
    fn slot_edges(&self) -> Result<Vec<Vec<usize>>> {
        let mut map: Vec<Vec<Option<usize>>> = self.nodes.iter().map(|t| vec![None; t.order()]).collect();
        let m = self.nodes.first().map_or(0, |t| t.spaces().len());
        for (e, edge) in self.edges.iter().enumerate() {
            let bad = |msg: &str| TensorError::Network(format!("edge {e}: {msg}"));
            if edge.from >= self.nodes.len() || edge.to >= self.nodes.len() || edge.space >= m {
                return Err(bad("unknown node or space"));
            }
            let ta = self.nodes[edge.from].ttype();
            let tb = self.nodes[edge.to].ttype();
            if edge.contra >= ta.contra[edge.space] || edge.co >= tb.co[edge.space] {
                return Err(bad("position out of range"));
            }
            for (node, f) in [
                (edge.from, ta.contra_offset(edge.space) + edge.contra),
                (edge.to, tb.co_offset(edge.space) + edge.co),
            ] {
                if map[node][f].replace(e).is_some() {
                    return Err(bad("slot used twice"));
                }
            }
        }
        map.into_iter()
            .enumerate()
            .map(|(n, slots)| {
                slots
                    .into_iter()
                    .collect::<Option<Vec<usize>>>()
                    .ok_or_else(|| TensorError::Network(format!("node {n} has an open slot")))
            })
            .collect()
    }

    fn legs(t: &MixedTensor, slots: &[usize]) -> Legs {
        // self-loops: pairs of factors sharing an edge
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut loops = Vec::new();
        let mut keep = Vec::new();
        for (f, &e) in slots.iter().enumerate() {
            if let Some(&g) = first.get(&e) {
                loops.push((g, f));
            } else {
                first.insert(e, f);
                keep.push(f);
            }
        }
        keep.retain(|f| !loops.iter().any(|&(g, _)| g == *f));
        let edges = keep.iter().map(|&f| slots[f]).collect();
        let mut acc: HashMap<Vec<u32>, Scalar> = HashMap::new();
        for (idx, v) in t.entries() {
            if loops.iter().all(|&(a, b)| idx[a] == idx[b]) {
                let key: Vec<u32> = keep.iter().map(|&f| idx[f] as u32).collect();
                *acc.entry(key).or_default() += v;
            }
        }
        Legs { edges, entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    fn merge(a: &Legs, b: &Legs) -> Legs {
        let shared: Vec<usize> = a.edges.iter().copied().filter(|e| b.edges.contains(e)).collect();
        let a_shared: Vec<usize> = shared.iter().map(|e| a.edges.iter().position(|x| x == e).unwrap()).collect();
        let b_shared: Vec<usize> = shared.iter().map(|e| b.edges.iter().position(|x| x == e).unwrap()).collect();
        let a_rest: Vec<usize> = (0..a.edges.len()).filter(|i| !a_shared.contains(i)).collect();
        let b_rest: Vec<usize> = (0..b.edges.len()).filter(|i| !b_shared.contains(i)).collect();
        let edges: Vec<usize> =
            a_rest.iter().map(|&i| a.edges[i]).chain(b_rest.iter().map(|&i| b.edges[i])).collect();
        let mut index: HashMap<Vec<u32>, Vec<(Vec<u32>, &Scalar)>> = HashMap::new();
        for (idx, v) in &b.entries {
            let key = b_shared.iter().map(|&i| idx[i]).collect();
            let rest = b_rest.iter().map(|&i| idx[i]).collect();
            index.entry(key).or_default().push((rest, v));
        }
        let mut acc: HashMap<Vec<u32>, Scalar> = HashMap::new();
        for (idx, v) in &a.entries {
            let key: Vec<u32> = a_shared.iter().map(|&i| idx[i]).collect();
            if let Some(matches) = index.get(&key) {
                let head: Vec<u32> = a_rest.iter().map(|&i| idx[i]).collect();
                for (rest, w) in matches {
                    let mut k = head.clone();
                    k.extend_from_slice(rest);
                    *acc.entry(k).or_default() += &(v * *w);
                }
            }
        }
        Legs { edges, entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    /// Contracts the whole network to a scalar.
    pub fn evaluate(&self) -> Result<Scalar> {
        if self.nodes.is_empty() {
            return Ok(Scalar::one());
        }
        let spaces = self.nodes[0].spaces();
        if self.nodes.iter().any(|t| t.spaces() != spaces) {
            return Err(TensorError::Network("nodes over different spaces".into()));
        }
        let slots = self.slot_edges()?;
        let dim_of = |e: usize| spaces.dim(self.edges[e].space) as f64;
        let mut pool: Vec<Legs> = self.nodes.iter().zip(&slots).map(|(t, s)| Self::legs(t, s)).collect();
        let mut result = Scalar::one();
        loop {
            if pool.iter().any(|l| l.entries.is_empty()) {
                return Ok(Scalar::zero());
            }
            let mut i = 0;
            while i < pool.len() {
                if pool[i].is_scalar() {
                    result = &result * &pool.swap_remove(i).value();
                } else {
                    i += 1;
                }
            }
            if pool.is_empty() {
                return Ok(result);
            }
            let mut best: Option<(f64, usize, usize)> = None;
            for a in 0..pool.len() {
                for b in a + 1..pool.len() {
                    let shared: Vec<usize> =
                        pool[a].edges.iter().copied().filter(|e| pool[b].edges.contains(e)).collect();
                    if shared.is_empty() {
                        continue;
                    }
                    let denom: f64 = shared.iter().map(|&e| dim_of(e)).product();
                    let cost = pool[a].entries.len() as f64 * pool[b].entries.len() as f64 / denom;
                    if best.is_none_or(|(c, _, _)| cost < c) {
                        best = Some((cost, a, b));
                    }
                }
            }
            let (_, a, b) = best.ok_or_else(|| TensorError::Network("dangling legs".into()))?;
            let merged = Self::merge(&pool[a], &pool[b]);
            pool.swap_remove(b);
            pool[a] = merged;
        }
    }
}
