use proptest::prelude::*;
use tensor_core::{Field, GroupElement, GroupTag, Matrix, MixedTensor, PartialBijection, Perm, Scalar, SpaceTuple, TensorType};

fn tensor(n: usize, a: usize, b: usize, entries: Vec<(Vec<usize>, i64, i64)>) -> MixedTensor {
    let sp = SpaceTuple::single(n).unwrap();
    MixedTensor::from_entries(
        &sp,
        TensorType::single(a, b),
        Field::Q,
        entries.into_iter().map(|(idx, p, q)| (idx.into_iter().map(|i| i % n).collect(), Scalar::frac(p, q))),
    )
    .unwrap()
}

fn arb_tensor(n: usize, a: usize, b: usize) -> impl Strategy<Value = MixedTensor> {
    prop::collection::vec((prop::collection::vec(0..n, a + b), -2i64..=2, 1i64..=3), 0..8)
        .prop_map(move |e| tensor(n, a, b, e))
}

fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::new(v).unwrap())
}

fn arb_gl(n: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(-2i64..=2, n * n).prop_filter_map("singular", move |v| {
        let m = Matrix::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .unwrap();
        GroupElement::new(GroupTag::GL, vec![m], None).ok()
    })
}

/// Block-swapping permutation taking `t ⊗ s` positions to `s ⊗ t` positions.
fn swap_blocks(first: usize, second: usize) -> Perm {
    Perm::new((0..first).map(|j| j + second).chain((0..second)).collect()).unwrap()
}

/// Row = contravariant multi-index, column = covariant multi-index.
fn as_matrix(t: &MixedTensor) -> Matrix {
    let n = t.spaces().dim(0);
    let (a, b) = (t.ttype().contra[0], t.ttype().co[0]);
    let mut m = Matrix::zeros(n.pow(a as u32), n.pow(b as u32));
    for (idx, v) in t.entries() {
        let r = idx[..a].iter().fold(0, |acc, &i| acc * n + i);
        let c = idx[a..].iter().fold(0, |acc, &i| acc * n + i);
        m.set(r, c, v.clone());
    }
    m
}

/// `e_k ↦ e_i` with `i_{π(j)} = k_j`, built on the tensor-power basis directly.
fn permutation_matrix_oracle(n: usize, pi: &Perm) -> Matrix {
    let d = pi.len();
    let size = n.pow(d as u32);
    let mut m = Matrix::zeros(size, size);
    for col in 0..size {
        let mut k = vec![0; d];
        let mut c = col;
        for j in (0..d).rev() {
            k[j] = c % n;
            c /= n;
        }
        let mut i = vec![0; d];
        for j in 0..d {
            i[pi.apply(j)] = k[j];
        }
        let row = i.iter().fold(0, |acc, &x| acc * n + x);
        m.set(row, col, Scalar::one());
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tensor_product_commutes_up_to_block_permutation(
        n in 1usize..=3,
        (a, b, c, d) in (0usize..=2, 0usize..=2, 0usize..=2, 0usize..=2),
        seed_t in prop::collection::vec((prop::collection::vec(0usize..3, 4), -2i64..=2, 1i64..=3), 0..6),
        seed_s in prop::collection::vec((prop::collection::vec(0usize..3, 4), -2i64..=2, 1i64..=3), 0..6),
    ) {
        let trim = |e: Vec<(Vec<usize>, i64, i64)>, k: usize| e.into_iter().map(|(mut i, p, q)| { i.truncate(k); (i, p, q) }).collect();
        let t = tensor(n, a, b, trim(seed_t, a + b));
        let s = tensor(n, c, d, trim(seed_s, c + d));
        let ts = t.tensor_product(&s).unwrap();
        let st = s.tensor_product(&t).unwrap();
        let moved = ts.permute_factors(&[(swap_blocks(a, c), swap_blocks(b, d))]).unwrap();
        prop_assert_eq!(moved, st);
        prop_assert!(ts.nnz() <= t.nnz() * s.nnz());
    }

    #[test]
    fn contraction_commutes_with_tensor_product(
        t in arb_tensor(2, 2, 2),
        s in arb_tensor(2, 1, 1),
        p in 0usize..2,
        q in 0usize..2,
    ) {
        let gamma = PartialBijection::from_zero_based(vec![(p, q)]).unwrap();
        let left = t.contract(0, &gamma).unwrap().tensor_product(&s).unwrap();
        let right = t.tensor_product(&s).unwrap().contract(0, &gamma).unwrap();
        prop_assert_eq!(&left, &right);
        let shifted = PartialBijection::from_zero_based(vec![(2, 2)]).unwrap();
        let left = t.tensor_product(&s.contract(0, &PartialBijection::diagonal(1)).unwrap()).unwrap();
        prop_assert_eq!(left, t.tensor_product(&s).unwrap().contract(0, &shifted).unwrap());
    }

    #[test]
    fn identity_contraction_is_cycle_action(n in 1usize..=3, t in arb_tensor(3, 3, 1), p in 1usize..=3) {
        let t = tensor(n, 3, 1, t.entries().map(|(i, _)| (i, 1, 1)).collect());
        let id = MixedTensor::identity(t.spaces(), 0).unwrap();
        let gamma = PartialBijection::new(&[(p + 1, 1)]).unwrap();
        let lhs = id.tensor_product(&t).unwrap().contract(0, &gamma).unwrap();
        let mut images: Vec<usize> = (0..3).collect();
        images[p - 1] = 0;
        for (j, img) in images.iter_mut().enumerate().take(p - 1) {
            *img = j + 1;
        }
        let cyc = Perm::new(images).unwrap();
        prop_assert_eq!(lhs, t.permute_factors(&[(cyc, Perm::identity(1))]).unwrap());
    }

    #[test]
    fn stepwise_contraction_matches_single(
        t in arb_tensor(2, 3, 3),
        gamma in (arb_perm(3), 0usize..=3),
    ) {
        let (perm, k) = gamma;
        let pairs: Vec<(usize, usize)> = (0..k).map(|j| (j, perm.apply(j))).collect();
        let whole = t.contract(0, &PartialBijection::from_zero_based(pairs.clone()).unwrap()).unwrap();
        let mut step = t.clone();
        let mut done: Vec<(usize, usize)> = Vec::new();
        for &(p, q) in &pairs {
            let p2 = p - done.iter().filter(|d| d.0 < p).count();
            let q2 = q - done.iter().filter(|d| d.1 < q).count();
            step = step.contract(0, &PartialBijection::from_zero_based(vec![(p2, q2)]).unwrap()).unwrap();
            done.push((p, q));
        }
        prop_assert_eq!(whole, step);
    }

    #[test]
    fn permutation_action_is_a_group_action(
        t in arb_tensor(2, 3, 2),
        p1 in arb_perm(3), p2 in arb_perm(3),
        s1 in arb_perm(2), s2 in arb_perm(2),
    ) {
        let once = t.permute_factors(&[(p2.clone(), s2.clone())]).unwrap()
            .permute_factors(&[(p1.clone(), s1.clone())]).unwrap();
        let both = t.permute_factors(&[(p1.compose(&p2), s1.compose(&s2))]).unwrap();
        prop_assert_eq!(once, both);
        prop_assert_eq!(t.permute_factors(&[(Perm::identity(3), Perm::identity(2))]).unwrap(), t);
    }

    #[test]
    fn full_trace_equals_trace_after_action(t in arb_tensor(3, 3, 3), pi in arb_perm(3)) {
        let direct = t.full_trace(std::slice::from_ref(&pi)).unwrap();
        let moved = t.permute_factors(&[(pi, Perm::identity(3))]).unwrap();
        prop_assert_eq!(direct, moved.full_trace(&[Perm::identity(3)]).unwrap());
    }

    #[test]
    fn group_action_commutes_with_operations(
        g in arb_gl(2),
        h in arb_gl(2),
        t in arb_tensor(2, 2, 1),
        s in arb_tensor(2, 1, 1),
        pi in arb_perm(2),
    ) {
        let gt = g.apply(&t).unwrap();
        prop_assert_eq!(g.apply(&t.tensor_product(&s).unwrap()).unwrap(), gt.tensor_product(&g.apply(&s).unwrap()).unwrap());
        let gamma = PartialBijection::from_zero_based(vec![(1, 0)]).unwrap();
        prop_assert_eq!(g.apply(&t.contract(0, &gamma).unwrap()).unwrap(), gt.contract(0, &gamma).unwrap());
        let perms = [(pi, Perm::identity(1))];
        prop_assert_eq!(g.apply(&t.permute_factors(&perms).unwrap()).unwrap(), gt.permute_factors(&perms).unwrap());
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(gh.apply(&t).unwrap(), g.apply(&h.apply(&t).unwrap()).unwrap());
        let id = MixedTensor::identity(t.spaces(), 0).unwrap();
        prop_assert_eq!(g.apply(&id).unwrap(), id);
    }

    #[test]
    fn permutation_tensors_compose_like_matrices(pi in arb_perm(3), sigma in arb_perm(3)) {
        let sp = SpaceTuple::single(2).unwrap();
        let p = MixedTensor::permutation(&sp, 0, &pi).unwrap();
        let s = MixedTensor::permutation(&sp, 0, &sigma).unwrap();
        prop_assert_eq!(p.nnz(), 8);
        prop_assert_eq!(as_matrix(&p), permutation_matrix_oracle(2, &pi));
        let composed = p.compose(&s).unwrap();
        let oracle = permutation_matrix_oracle(2, &pi).mul(&permutation_matrix_oracle(2, &sigma)).unwrap();
        prop_assert_eq!(as_matrix(&composed), oracle);
        prop_assert_eq!(composed, MixedTensor::permutation(&sp, 0, &pi.compose(&sigma)).unwrap());
    }

    #[test]
    fn compose_matches_matrix_product(a in arb_tensor(3, 1, 1), b in arb_tensor(3, 1, 1)) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(as_matrix(&ab), as_matrix(&a).mul(&as_matrix(&b)).unwrap());
        let id = MixedTensor::identity(a.spaces(), 0).unwrap();
        prop_assert_eq!(id.compose(&a).unwrap(), a);
    }

    #[test]
    fn lower_then_raise_roundtrips(t in arb_tensor(2, 1, 2), sign in prop::bool::ANY) {
        let form = if sign {
            Matrix::from_ints(&[&[0, 1], &[-1, 0]])
        } else {
            Matrix::from_ints(&[&[2, 1], &[1, 1]])
        };
        let low = t.lower_indices(std::slice::from_ref(&form)).unwrap();
        prop_assert_eq!(low.ttype(), &TensorType::single(3, 0));
        prop_assert_eq!(low.raise_indices(&[form], &[2]).unwrap(), t);
    }

    #[test]
    fn stored_entries_are_nonzero(t in arb_tensor(2, 2, 2), s in arb_tensor(2, 1, 1)) {
        let prod = t.tensor_product(&s).unwrap();
        let diff = prod.sub(&prod).unwrap();
        prop_assert!(diff.is_zero());
        for r in [&prod, &prod.contract(0, &PartialBijection::diagonal(2)).unwrap()] {
            prop_assert!(r.entries().all(|(_, v)| !v.is_zero()));
        }
    }
}

#[test]
fn standard_form_lowering_only_retypes() {
    let t = tensor(3, 1, 1, vec![(vec![0, 2], 1, 2), (vec![1, 1], -2, 1)]);
    let low = t.lower_indices(&[Matrix::identity(3)]).unwrap();
    assert_eq!(low.entries().map(|(i, v)| (i, v.clone())).collect::<Vec<_>>(),
        t.entries().map(|(i, v)| (i, v.clone())).collect::<Vec<_>>());
}

#[test]
fn dim_one_identity_and_permutation_sizes() {
    let sp = SpaceTuple::single(1).unwrap();
    assert_eq!(MixedTensor::identity(&sp, 0).unwrap().nnz(), 1);
    let sp3 = SpaceTuple::single(3).unwrap();
    assert_eq!(MixedTensor::identity(&sp3, 0).unwrap().nnz(), 3);
    let p = MixedTensor::permutation(&sp3, 0, &Perm::cycle(3)).unwrap();
    assert_eq!(p.nnz(), 27);
}
