use std::collections::BTreeMap;

use tensor_core::{GroupTag, MixedTensor, NetworkEdge, Perm, Scalar, SpaceTuple, TensorNetwork, TensorType};

use crate::error::InvariantError;
use crate::fundamentals::{fundamental_kinds, FundamentalKind};
use crate::invariant::{fundamental_types, ContractionInvariant, Layout};
use crate::signature::Signature;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Summand(usize),
    Fundamental(usize),
    /// `Id ∈ V_i ⊗ V_i^*`.
    Identity(usize),
}

/// `(node, position)`.
pub type Slot = (usize, usize);

/// Contraction diagram with explicit nodes; may contain identity tensors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    m: usize,
    summand_types: Vec<TensorType>,
    fundamental_types: Vec<TensorType>,
    nodes: Vec<Option<NodeKind>>,
    out: BTreeMap<(usize, usize, usize), Slot>,
    inn: BTreeMap<(usize, usize, usize), Slot>,
}

impl Network {
    pub fn new(m: usize, summand_types: Vec<TensorType>, fundamental_types: Vec<TensorType>) -> Self {
        Network { m, summand_types, fundamental_types, nodes: Vec::new(), out: BTreeMap::new(), inn: BTreeMap::new() }
    }

    pub fn for_signature(sig: &Signature) -> Self {
        Network::new(sig.m(), sig.types.clone(), fundamental_types(sig))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn add(&mut self, kind: NodeKind) -> usize {
        self.nodes.push(Some(kind));
        self.nodes.len() - 1
    }

    pub fn kind(&self, u: usize) -> Option<NodeKind> {
        self.nodes.get(u).copied().flatten()
    }

    pub fn live_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&u| self.nodes[u].is_some()).collect()
    }

    pub fn kind_type(&self, kind: NodeKind) -> TensorType {
        match kind {
            NodeKind::Summand(k) => self.summand_types[k].clone(),
            NodeKind::Fundamental(j) => self.fundamental_types[j].clone(),
            NodeKind::Identity(i) => TensorType::unit(self.m, i, 1, 1),
        }
    }

    pub fn node_type(&self, u: usize) -> TensorType {
        self.kind_type(self.kind(u).expect("live node"))
    }

    /// Connects contravariant slot `from` to covariant slot `to` in `space`.
    pub fn wire(&mut self, space: usize, from: Slot, to: Slot) -> Result<()> {
        let (ta, tb) = (self.node_type(from.0), self.node_type(to.0));
        if space >= self.m || from.1 >= ta.contra[space] || to.1 >= tb.co[space] {
            return Err(InvariantError::Network(format!("slot out of range: {from:?} -> {to:?} in space {space}")));
        }
        if self.out.contains_key(&(space, from.0, from.1)) || self.inn.contains_key(&(space, to.0, to.1)) {
            return Err(InvariantError::Network(format!("slot reused: {from:?} -> {to:?} in space {space}")));
        }
        self.out.insert((space, from.0, from.1), to);
        self.inn.insert((space, to.0, to.1), from);
        Ok(())
    }

    pub fn target(&self, space: usize, from: Slot) -> Option<Slot> {
        self.out.get(&(space, from.0, from.1)).copied()
    }

    pub fn source(&self, space: usize, to: Slot) -> Option<Slot> {
        self.inn.get(&(space, to.0, to.1)).copied()
    }

    /// Removes the wire leaving contravariant slot `from`, returning its end.
    pub fn unwire(&mut self, space: usize, from: Slot) -> Option<Slot> {
        let to = self.out.remove(&(space, from.0, from.1))?;
        self.inn.remove(&(space, to.0, to.1));
        Some(to)
    }

    fn remove_node(&mut self, u: usize) {
        self.nodes[u] = None;
    }

    /// All wires as `(space, contravariant end, covariant end)`.
    pub fn wires(&self) -> Vec<(usize, Slot, Slot)> {
        self.out.iter().map(|(&(i, u, p), &to)| (i, (u, p), to)).collect()
    }

    pub fn wire_count(&self) -> usize {
        self.out.len()
    }

    /// Every slot of every live node is wired.
    pub fn is_closed(&self) -> bool {
        self.live_nodes().into_iter().all(|u| {
            let t = self.node_type(u);
            (0..self.m).all(|i| {
                (0..t.contra[i]).all(|p| self.out.contains_key(&(i, u, p)))
                    && (0..t.co[i]).all(|q| self.inn.contains_key(&(i, u, q)))
            })
        })
    }

    /// Nodes `0..N` in product order of `inv`.
    pub fn from_invariant(sig: &Signature, inv: &ContractionInvariant) -> Result<Self> {
        let layout = inv.layout(sig)?;
        let mut net = Network::for_signature(sig);
        for (k, &d) in inv.degrees.iter().enumerate() {
            for _ in 0..d {
                net.add(NodeKind::Summand(k));
            }
        }
        for (j, &f) in inv.fundamentals.iter().enumerate() {
            for _ in 0..f {
                net.add(NodeKind::Fundamental(j));
            }
        }
        for i in 0..sig.m() {
            for (p, &from) in layout.contra_slots[i].iter().enumerate() {
                net.wire(i, from, layout.co_slots[i][inv.wiring[i].apply(p)])?;
            }
        }
        Ok(net)
    }

    /// Canonical product-order invariant; identity nodes must be removed first.
    pub fn to_invariant(&self) -> Result<ContractionInvariant> {
        if !self.is_closed() {
            return Err(InvariantError::Network("open slots".into()));
        }
        let mut order = self.live_nodes();
        if order.iter().any(|&u| matches!(self.kind(u), Some(NodeKind::Identity(_)))) {
            return Err(InvariantError::Network("identity nodes present".into()));
        }
        order.sort_by_key(|&u| self.kind(u));
        let mut degrees = vec![0; self.summand_types.len()];
        let mut fundamentals = vec![0; self.fundamental_types.len()];
        for &u in &order {
            match self.kind(u).unwrap() {
                NodeKind::Summand(k) => degrees[k] += 1,
                NodeKind::Fundamental(j) => fundamentals[j] += 1,
                NodeKind::Identity(_) => unreachable!(),
            }
        }
        let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &u)| (u, r)).collect();
        let layout = Layout::new(order.iter().map(|&u| self.node_type(u)).collect(), self.m);
        if !layout.is_balanced() {
            return Err(InvariantError::Unbalanced("network".into()));
        }
        let mut wiring = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let mut images = vec![0; layout.contra_slots[i].len()];
            for (&(s, u, p), &(w, q)) in self.out.range((i, 0, 0)..(i + 1, 0, 0)) {
                debug_assert_eq!(s, i);
                images[layout.contra_base[i][pos[&u]] + p] = layout.co_base[i][pos[&w]] + q;
            }
            wiring.push(Perm::new(images)?);
        }
        Ok(ContractionInvariant { degrees, fundamentals, wiring })
    }

    /// Drops identity nodes; returns the number of closed identity loops per space.
    pub fn remove_identities(&self) -> Result<(Network, Vec<usize>)> {
        let mut net = self.clone();
        let mut loops = vec![0; self.m];
        for u in self.live_nodes() {
            let Some(NodeKind::Identity(i)) = net.kind(u) else {
                continue;
            };
            let to = net.unwire(i, (u, 0)).ok_or_else(|| InvariantError::Network("open identity".into()))?;
            if to == (u, 0) {
                loops[i] += 1;
            } else {
                let from = net.source(i, (u, 0)).ok_or_else(|| InvariantError::Network("open identity".into()))?;
                net.unwire(i, from);
                net.wire(i, from, to)?;
            }
            net.remove_node(u);
        }
        Ok((net, loops))
    }

    /// Evaluates directly, identity nodes included.
    pub fn evaluate_with(&self, spaces: &SpaceTuple, tensors: &[MixedTensor], fundamentals: &[MixedTensor]) -> Result<Scalar> {
        let ids: Vec<MixedTensor> =
            (0..self.m).map(|i| MixedTensor::identity(spaces, i)).collect::<std::result::Result<_, _>>()?;
        let live = self.live_nodes();
        let index: BTreeMap<usize, usize> = live.iter().enumerate().map(|(r, &u)| (u, r)).collect();
        let mut tn = TensorNetwork::new();
        for &u in &live {
            tn.add_node(match self.kind(u).unwrap() {
                NodeKind::Summand(k) => &tensors[k],
                NodeKind::Fundamental(j) => &fundamentals[j],
                NodeKind::Identity(i) => &ids[i],
            });
        }
        for (&(i, u, p), &(w, q)) in &self.out {
            tn.connect(NetworkEdge { space: i, from: index[&u], contra: p, to: index[&w], co: q });
        }
        Ok(tn.evaluate()?)
    }
}

/// Contracts adjacent `ḡ`–`g` pairs into identities and removes them.
///
/// Returns the simplified network, the accumulated sign, and identity loops per space; the value
/// of the input equals `sign · Π n_i^{loops_i}` times the value of the output.
pub fn simplify_forms(net: &Network, group: GroupTag) -> Result<(Network, i64, Vec<usize>)> {
    let eps: i64 = match group {
        GroupTag::O => 1,
        GroupTag::Sp => -1,
        _ => return net.remove_identities().map(|(n, l)| (n, 1, l)),
    };
    let kinds = fundamental_kinds(group, net.m);
    let kind_of = |u: usize, n: &Network| match n.kind(u) {
        Some(NodeKind::Fundamental(j)) => kinds.get(j).copied(),
        _ => None,
    };
    let mut net = net.clone();
    let mut sign = 1i64;
    loop {
        let mut found = None;
        'search: for u in net.live_nodes() {
            if let Some(FundamentalKind::DualForm(i)) = kind_of(u, &net) {
                for alpha in 0..2 {
                    if let Some((w, beta)) = net.target(i, (u, alpha)) {
                        if kind_of(w, &net) == Some(FundamentalKind::Form(i)) {
                            found = Some((u, w, i, alpha, beta));
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((u, w, i, alpha, beta)) = found else {
            break;
        };
        if alpha == 0 {
            sign *= eps;
        }
        if beta == 1 {
            sign *= eps;
        }
        let ta = net.target(i, (u, 1 - alpha));
        let sc = net.source(i, (w, 1 - beta));
        net.unwire(i, (u, 1 - alpha));
        net.unwire(i, (u, alpha));
        if let Some(s) = sc {
            net.unwire(i, s);
        }
        net.remove_node(u);
        net.remove_node(w);
        match (ta, sc) {
            (Some(t), Some(_)) if t == (w, 1 - beta) => {
                let e = net.add(NodeKind::Identity(i));
                net.wire(i, (e, 0), (e, 0))?;
            }
            (Some(t), Some(s)) => net.wire(i, s, t)?,
            _ => return Err(InvariantError::Network("open form slot".into())),
        }
    }
    let (net, loops) = net.remove_identities()?;
    Ok((net, sign, loops))
}
