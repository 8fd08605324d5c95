use invariant_engine::{evaluate, Instance, Signature};
use proptest::prelude::*;
use reduction_catalog::{gi_encode, pipeline, GiMode, Graph, Pad, Reduction};
use tensor_core::{Field, GroupElement, GroupTag, MixedTensor, Perm, Scalar, SpaceTuple, TensorType};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        prop::collection::vec(any::<bool>(), len)
            .prop_map(move |mask| Graph::new(n, pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e)).unwrap())
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::new(v).unwrap())
}

fn instance(n: usize, types: Vec<TensorType>, values: &[i64]) -> Instance {
    let sig = Signature::new(SpaceTuple::single(n).unwrap(), GroupTag::GL, Field::Q, types, None).unwrap();
    let mut k = 0;
    let mut tensors = Vec::new();
    for t in &sig.types {
        let zero = MixedTensor::zero(&sig.spaces, t.clone(), Field::Q).unwrap();
        let count: u64 = zero.factor_dims().iter().map(|&d| d as u64).product();
        let entries: Vec<_> = (0..count)
            .map(|key| {
                k += 1;
                (zero.decode(key), Scalar::from_int(values[(k - 1) % values.len()]))
            })
            .collect();
        tensors.push(MixedTensor::from_entries(&sig.spaces, t.clone(), Field::Q, entries).unwrap());
    }
    Instance::new(sig, tensors).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_roundtrips(g in arb_graph(6)) {
        prop_assert_eq!(g.to_string().parse::<Graph>().unwrap(), g);
    }

    #[test]
    fn relabelling_is_the_permutation_action(
        (g, sigma) in arb_graph(5).prop_flat_map(|g| { let n = g.n(); (Just(g), arb_perm(n)) })
    ) {
        let x = gi_encode(&g, GiMode::Sn).unwrap();
        let y = gi_encode(&g.relabel(&sigma).unwrap(), GiMode::Sn).unwrap();
        let p = GroupElement::from_permutations(&[sigma]).unwrap();
        prop_assert_eq!(x.apply_group(&p).unwrap(), y);
    }

    #[test]
    fn gl_encoding_keeps_the_adjacency_first(g in arb_graph(5)) {
        let sn = gi_encode(&g, GiMode::Sn).unwrap();
        let gl = gi_encode(&g, GiMode::Gl).unwrap();
        prop_assert_eq!(&gl.tensors[0], &sn.tensors[0]);
        prop_assert_eq!(gl.tensors[1].nnz(), g.n());
        prop_assert_eq!(gl.tensors[2].nnz(), g.n());
    }

    #[test]
    fn pad_is_injective(n in 1usize..=3, values in prop::collection::vec(-2i64..=2, 1..12)) {
        let x = instance(n, vec![TensorType::single(1, 1)], &values);
        let y = Pad::to(vec![TensorType::single(2, 2)]).apply(&x).unwrap();
        prop_assert_eq!(x.tensors[0].is_zero(), y.tensors[0].is_zero());
        prop_assert_eq!(y.tensors[0].nnz(), x.tensors[0].nnz() * n);
    }

    #[test]
    fn gi_to_peps_preserves_degree_squared_sum(g in arb_graph(3)) {
        let x = gi_encode(&g, GiMode::Sn).unwrap();
        let p = pipeline("gi-to-peps").unwrap();
        let res = p.resolve(&x.signature).unwrap();
        let sig = &x.signature;
        let pi = Perm::from_one_based(&[1, 3, 2, 5, 4, 7, 8, 6, 9, 10]).unwrap();
        let f = invariant_engine::ContractionInvariant::new(sig, vec![2], vec![2, 5], vec![pi]).unwrap();
        let want: usize = g.degrees().iter().map(|d| d * d).sum();
        prop_assert_eq!(evaluate(&f, &x).unwrap(), Scalar::from_int(want as i64));
        let pb = p.pullback(sig, &f).unwrap();
        let y = p.apply(&x).unwrap();
        prop_assert_eq!(evaluate(&pb.invariant, &y).unwrap(), &Scalar::from(pb.factor) * &evaluate(&f, &x).unwrap());
        prop_assert_eq!(res.stages.len(), p.len());
    }

    #[test]
    fn pipeline_certificate_roundtrips_through_json(g in arb_graph(3)) {
        let x = gi_encode(&g, GiMode::Sn).unwrap();
        let cert = pipeline("gi-to-peps").unwrap().certificate(&x.signature).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        prop_assert_eq!(serde_json::from_str::<reduction_catalog::Certificate>(&text).unwrap(), cert);
    }
}
