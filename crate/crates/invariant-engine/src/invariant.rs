use std::fmt;

use tensor_core::{MixedTensor, NetworkEdge, Perm, Scalar, TensorNetwork, TensorType};

use crate::error::InvariantError;
use crate::fundamentals::{fundamental_kinds, fundamental_tensors};
use crate::signature::{Instance, Signature};
use crate::Result;

/// `Tr_π(x_1^{⊗d_1} ⊗ … ⊗ x_p^{⊗d_p} ⊗ F_1^{⊗f_1} ⊗ …)` with one wiring permutation per space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContractionInvariant {
    pub degrees: Vec<usize>,
    pub fundamentals: Vec<usize>,
    /// Per space: contravariant slot `p` is contracted with covariant slot `wiring[i](p)`.
    pub wiring: Vec<Perm>,
}

/// Slot bookkeeping for the big tensor product.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    /// `[space][node]` offset of the node's first contravariant slot.
    pub contra_base: Vec<Vec<usize>>,
    pub co_base: Vec<Vec<usize>>,
    /// `[space][slot]` → `(node, position)`.
    pub contra_slots: Vec<Vec<(usize, usize)>>,
    pub co_slots: Vec<Vec<(usize, usize)>>,
}

impl Layout {
    pub fn new(node_types: Vec<TensorType>, m: usize) -> Self {
        let mut contra_base = vec![Vec::new(); m];
        let mut co_base = vec![Vec::new(); m];
        let mut contra_slots = vec![Vec::new(); m];
        let mut co_slots = vec![Vec::new(); m];
        for i in 0..m {
            for (u, t) in node_types.iter().enumerate() {
                contra_base[i].push(contra_slots[i].len());
                co_base[i].push(co_slots[i].len());
                contra_slots[i].extend((0..t.contra[i]).map(|p| (u, p)));
                co_slots[i].extend((0..t.co[i]).map(|q| (u, q)));
            }
        }
        Layout { contra_base, co_base, contra_slots, co_slots }
    }

    pub fn m(&self) -> usize {
        self.contra_slots.len()
    }

    pub fn is_balanced(&self) -> bool {
        (0..self.m()).all(|i| self.contra_slots[i].len() == self.co_slots[i].len())
    }
}

/// Node types in product order: summand copies, then fundamental copies.
pub(crate) fn node_types(types: &[TensorType], ftypes: &[TensorType], d: &[usize], f: &[usize]) -> Vec<TensorType> {
    let mut out = Vec::new();
    for (t, &k) in types.iter().zip(d) {
        out.extend(std::iter::repeat_n(t.clone(), k));
    }
    for (t, &k) in ftypes.iter().zip(f) {
        out.extend(std::iter::repeat_n(t.clone(), k));
    }
    out
}

pub(crate) fn fundamental_types(sig: &Signature) -> Vec<TensorType> {
    fundamental_kinds(sig.group, sig.m()).into_iter().map(|k| k.ttype(sig.m())).collect()
}

impl ContractionInvariant {
    /// Checks that the wiring fits the slot counts of `sig`.
    pub fn new(sig: &Signature, degrees: Vec<usize>, fundamentals: Vec<usize>, wiring: Vec<Perm>) -> Result<Self> {
        let inv = ContractionInvariant { degrees, fundamentals, wiring };
        inv.layout(sig)?;
        Ok(inv)
    }

    /// The empty contraction, with value 1.
    pub fn constant(sig: &Signature) -> Self {
        ContractionInvariant {
            degrees: vec![0; sig.p()],
            fundamentals: vec![0; fundamental_kinds(sig.group, sig.m()).len()],
            wiring: vec![Perm::identity(0); sig.m()],
        }
    }

    /// `Tr_π(x_k^{⊗d})` over a single space.
    pub fn trace_word(sig: &Signature, k: usize, d: usize, pi: Perm) -> Result<Self> {
        let mut degrees = vec![0; sig.p()];
        degrees[k] = d;
        let f = vec![0; fundamental_kinds(sig.group, sig.m()).len()];
        ContractionInvariant::new(sig, degrees, f, vec![pi])
    }

    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Number of contravariant slots per space.
    pub fn slots(&self) -> Vec<usize> {
        self.wiring.iter().map(Perm::len).collect()
    }

    pub(crate) fn layout(&self, sig: &Signature) -> Result<Layout> {
        let ftypes = fundamental_types(sig);
        if self.degrees.len() != sig.p() || self.fundamentals.len() != ftypes.len() {
            return Err(InvariantError::SignatureMismatch(format!(
                "invariant with {} degrees and {} fundamentals on {sig}",
                self.degrees.len(),
                self.fundamentals.len()
            )));
        }
        if self.wiring.len() != sig.m() {
            return Err(InvariantError::SignatureMismatch(format!("{} wirings for {} spaces", self.wiring.len(), sig.m())));
        }
        let layout = Layout::new(node_types(&sig.types, &ftypes, &self.degrees, &self.fundamentals), sig.m());
        for i in 0..sig.m() {
            let (a, b) = (layout.contra_slots[i].len(), layout.co_slots[i].len());
            if a != b {
                return Err(InvariantError::Unbalanced(format!("space {i}: {a} contravariant vs {b} covariant slots")));
            }
            if self.wiring[i].len() != a {
                return Err(InvariantError::Unbalanced(format!(
                    "space {i}: wiring on {} slots, product has {a}",
                    self.wiring[i].len()
                )));
            }
        }
        Ok(layout)
    }

    /// Evaluates on explicit summand and fundamental tensors.
    pub fn evaluate_on(&self, sig: &Signature, tensors: &[MixedTensor], fundamentals: &[MixedTensor]) -> Result<Scalar> {
        let layout = self.layout(sig)?;
        let mut nodes: Vec<&MixedTensor> = Vec::new();
        for (k, &d) in self.degrees.iter().enumerate() {
            nodes.extend(std::iter::repeat_n(&tensors[k], d));
        }
        for (j, &f) in self.fundamentals.iter().enumerate() {
            nodes.extend(std::iter::repeat_n(&fundamentals[j], f));
        }
        let mut net = TensorNetwork::new();
        for t in &nodes {
            net.add_node(t);
        }
        for i in 0..sig.m() {
            for (p, &(u, pos)) in layout.contra_slots[i].iter().enumerate() {
                let (w, q) = layout.co_slots[i][self.wiring[i].apply(p)];
                net.connect(NetworkEdge { space: i, from: u, contra: pos, to: w, co: q });
            }
        }
        let v = net.evaluate()?;
        Ok(v.to_field(sig.field)?)
    }
}

impl fmt::Display for ContractionInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let w: Vec<String> = self.wiring.iter().map(|p| p.to_string()).collect();
        write!(f, "d=[{}] f=[{}] wiring={}", list(&self.degrees), list(&self.fundamentals), w.join(";"))
    }
}

/// Exact value of `inv` on `x`.
pub fn evaluate(inv: &ContractionInvariant, x: &Instance) -> Result<Scalar> {
    let fund = fundamental_tensors(&x.signature)?;
    inv.evaluate_on(&x.signature, &x.tensors, &fund)
}
