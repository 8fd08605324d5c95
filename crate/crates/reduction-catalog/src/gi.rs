use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use invariant_engine::{fundamental_kinds, ContractionInvariant, FundamentalKind, Instance, Network, NodeKind, Signature};
use num_rational::BigRational;
use num_traits::One;
use tensor_core::{Field, GroupElement, GroupTag, MixedTensor, Perm, Scalar, SpaceTuple, TensorType};

use crate::rewrite::{finish_pullback, Rewrite};
use crate::util::{copy_node, require_element, require_group};
use crate::{Pullback, Reduction, ReductionError, Result};

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Edges are 0-based; self-loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(ReductionError::Graph(format!("self-loop at vertex {}", u + 1)));
            }
            if u >= n || v >= n {
                return Err(ReductionError::Graph(format!("edge {} {} outside 1..{n}", u + 1, v + 1)));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(ReductionError::Graph(format!("duplicate edge {} {}", u + 1, v + 1)));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Vertex `j` becomes `σ(j)`.
    pub fn relabel(&self, sigma: &Perm) -> Result<Self> {
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (sigma.apply(u), sigma.apply(v))))
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path")
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("complete")
    }

    /// All graphs on `n` vertices, one per edge subset.
    pub fn all(n: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        (0..1u64 << pairs.len())
            .map(|mask| Graph::new(n, pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e)).unwrap())
            .collect()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for &(u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| ReductionError::Graph("empty document".into()))?;
        let n = match head.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", c] => c.parse::<usize>().map_err(|_| ReductionError::Graph(format!("bad vertex count {c:?}")))?,
            _ => return Err(ReductionError::Graph(format!("expected \"n <count>\", found {head:?}"))),
        };
        let mut edges = Vec::new();
        for l in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let [u, v] = parts[..] else {
                return Err(ReductionError::Graph(format!("bad edge line {l:?}")));
            };
            let parse = |t: &str| match t.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(ReductionError::Graph(format!("bad vertex {t:?}"))),
            };
            edges.push((parse(u)?, parse(v)?));
        }
        Graph::new(n, edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GiMode {
    /// Adjacency tensor under `S_n`.
    Sn,
    /// `(x, h, g)` under `GL_n`.
    Gl,
}

fn adjacency(sp: &SpaceTuple, g: &Graph) -> Result<MixedTensor> {
    let entries = g.edges().flat_map(|(u, v)| [(vec![u, v], Scalar::one()), (vec![v, u], Scalar::one())]);
    Ok(MixedTensor::from_entries(sp, TensorType::single(2, 0), Field::Q, entries)?)
}

fn cube(sp: &SpaceTuple) -> Result<MixedTensor> {
    let n = sp.dim(0);
    Ok(MixedTensor::from_entries(sp, TensorType::single(3, 0), Field::Q, (0..n).map(|j| (vec![j, j, j], Scalar::one())))?)
}

fn diagonal(sp: &SpaceTuple) -> Result<MixedTensor> {
    let n = sp.dim(0);
    Ok(MixedTensor::from_entries(sp, TensorType::single(0, 2), Field::Q, (0..n).map(|j| (vec![j, j], Scalar::one())))?)
}

pub fn gi_encode(graph: &Graph, mode: GiMode) -> Result<Instance> {
    let sp = SpaceTuple::single(graph.n())?;
    let sig = Signature::new(sp.clone(), GroupTag::Sn, Field::Q, vec![TensorType::single(2, 0)], None)?;
    let x = Instance::new(sig, vec![adjacency(&sp, graph)?])?;
    match mode {
        GiMode::Sn => Ok(x),
        GiMode::Gl => GiEncode.apply(&x),
    }
}

const GI: &str = "gi_encode";

/// `x ↦ (x, h, g)`, the `S_n` problem as a GL problem.
pub struct GiEncode;

impl GiEncode {
    fn check(src: &Signature) -> Result<()> {
        require_group(GI, src, &[GroupTag::Sn])?;
        if src.m() != 1 || src.types != [TensorType::single(2, 0)] {
            return Err(ReductionError::schema(GI, "expected a single (2;0) adjacency summand"));
        }
        Ok(())
    }
}

impl Reduction for GiEncode {
    fn name(&self) -> String {
        GI.into()
    }

    fn target_signature(&self, src: &Signature) -> Result<Signature> {
        GiEncode::check(src)?;
        let types = vec![TensorType::single(2, 0), TensorType::single(3, 0), TensorType::single(0, 2)];
        Ok(Signature::new(src.spaces.clone(), GroupTag::GL, src.field, types, None)?)
    }

    fn apply(&self, x: &Instance) -> Result<Instance> {
        let tgt = self.target_signature(&x.signature)?;
        let sp = &x.signature.spaces;
        Ok(Instance::new(tgt, vec![x.tensors[0].clone(), cube(sp)?, diagonal(sp)?])?)
    }

    fn lift_group(&self, src: &Signature, g: &GroupElement) -> Result<GroupElement> {
        require_element(GI, src, g)?;
        Ok(g.retag(GroupTag::GL, None)?)
    }

    fn describe_lift(&self) -> String {
        "σ ↦ P_σ".into()
    }

    fn has_pullback(&self) -> bool {
        true
    }

    fn pullback(&self, src: &Signature, g: &ContractionInvariant) -> Result<Pullback> {
        let tgt = self.target_signature(src)?;
        let kinds = fundamental_kinds(GroupTag::Sn, 1);
        let snet = Network::from_invariant(src, g)?;
        let mut rw = Rewrite::new(Network::for_signature(&tgt));
        for u in snet.live_nodes() {
            let kind = match snet.kind(u).expect("live") {
                NodeKind::Fundamental(j) => match kinds[j] {
                    FundamentalKind::Cube(_) => NodeKind::Summand(1),
                    _ => NodeKind::Summand(2),
                },
                k => k,
            };
            copy_node(&mut rw, &snet, u, kind);
        }
        let net = rw.finish(&snet)?;
        finish_pullback(&net, tgt.dims(), 0, BigRational::one())
    }
}
