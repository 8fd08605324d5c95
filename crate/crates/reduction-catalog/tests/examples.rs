use invariant_engine::{evaluate, sn_orbit_oracle, ContractionInvariant, Instance, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reduction_catalog::{
    cube_form, gi_encode, hyperbolic_form, pipeline, step, Balance, CollapseSum, Detuple, FormToGl, GiMode, GlToForm, Graph,
    MergeSpaces, Pad, RankEmbed, Reduction, SwapGadget, UnitaryLift,
};
use tensor_core::{Field, GroupElement, GroupTag, Matrix, MixedTensor, Perm, Scalar, SpaceTuple, TensorType};

fn ty(a: usize, b: usize) -> TensorType {
    TensorType::single(a, b)
}

fn gl(dims: Vec<usize>, types: Vec<TensorType>) -> Signature {
    Signature::new(SpaceTuple::new(dims).unwrap(), GroupTag::GL, Field::Q, types, None).unwrap()
}

fn random_tensor(rng: &mut ChaCha8Rng, sp: &SpaceTuple, t: &TensorType, field: Field) -> MixedTensor {
    let zero = MixedTensor::zero(sp, t.clone(), field).unwrap();
    let count: u64 = zero.factor_dims().iter().map(|&d| d as u64).product();
    let mut entries = Vec::new();
    for k in 0..count {
        if !rng.gen_bool(0.6) {
            continue;
        }
        let re = Scalar::frac(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        let v = if field == Field::Qi { &re + &(&Scalar::i() * &Scalar::from_int(rng.gen_range(-2..=2))) } else { re };
        entries.push((zero.decode(k), v));
    }
    MixedTensor::from_entries(sp, t.clone(), field, entries).unwrap()
}

fn random_instance(seed: u64, sig: &Signature) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts = sig.types.iter().map(|t| random_tensor(&mut rng, &sig.spaces, t, sig.field)).collect();
    Instance::new(sig.clone(), ts).unwrap()
}

fn matrix_of(t: &MixedTensor) -> Matrix {
    let n = t.spaces().dim(0);
    let mut m = Matrix::zeros(n, n);
    for (idx, v) in t.entries() {
        m.set(idx[0], idx[1], v.clone());
    }
    m
}

fn trace(sig: &Signature, k: usize) -> ContractionInvariant {
    ContractionInvariant::trace_word(sig, k, 1, Perm::identity(1)).unwrap()
}

#[test]
fn balance_of_a_quadratic_cubic_and_dual_signature() {
    let sig = gl(vec![2], vec![ty(2, 0), ty(3, 0), ty(0, 2)]);
    let x = random_instance(1, &sig);
    let y = Balance.apply(&x).unwrap();
    assert_eq!(y.signature.types, vec![ty(2, 2), ty(6, 6)]);
    let (a, b, c) = (&x.tensors[0], &x.tensors[1], &x.tensors[2]);
    assert_eq!(y.tensors[0], a.tensor_product(c).unwrap());
    let bb = b.tensor_product(b).unwrap();
    let cc = c.tensor_product(c).unwrap().tensor_product(c).unwrap();
    assert_eq!(y.tensors[1], bb.tensor_product(&cc).unwrap());
}

#[test]
fn balance_keeps_balanced_signatures() {
    let sig = gl(vec![2], vec![ty(1, 1), ty(2, 2)]);
    let x = random_instance(2, &sig);
    assert_eq!(Balance.apply(&x).unwrap(), x);
}

#[test]
fn balance_of_an_unbalanceable_signature_is_empty() {
    let sig = gl(vec![3], vec![ty(1, 0)]);
    let y = Balance.apply(&random_instance(3, &sig)).unwrap();
    assert!(y.tensors.is_empty());
    assert!(y.signature.types.is_empty());
}

#[test]
fn pad_appends_identities_and_recovers_trace() {
    let sig = gl(vec![3], vec![ty(1, 1)]);
    let x = random_instance(4, &sig);
    let pad = Pad::to(vec![ty(2, 2)]);
    let y = pad.apply(&x).unwrap();
    let id = MixedTensor::identity(&sig.spaces, 0).unwrap();
    assert_eq!(y.tensors[0], x.tensors[0].tensor_product(&id).unwrap());
    let g = trace(&sig, 0);
    let pb = pad.pullback(&sig, &g).unwrap();
    assert_eq!(pb.c, 1);
    assert_eq!(evaluate(&pb.invariant, &y).unwrap(), &Scalar::from(pb.factor.clone()) * &evaluate(&g, &x).unwrap());
    assert_eq!(evaluate(&pb.invariant, &y).unwrap(), &Scalar::from_int(3) * &evaluate(&g, &x).unwrap());
}

#[test]
fn pad_to_the_same_types_is_the_identity() {
    let sig = gl(vec![2], vec![ty(1, 1), ty(2, 2)]);
    let x = random_instance(5, &sig);
    assert_eq!(Pad::to(sig.types.clone()).apply(&x).unwrap(), x);
}

#[test]
fn pad_fills_extra_summands_with_identity_powers() {
    let sig = gl(vec![2], vec![ty(1, 1)]);
    let x = random_instance(6, &sig);
    let y = Pad::to(vec![ty(1, 1), ty(2, 2)]).apply(&x).unwrap();
    assert_eq!(y.tensors[1], MixedTensor::identity_power(&sig.spaces, 0, 2).unwrap());
}

#[test]
fn merge_places_blocks_by_offset() {
    let t = TensorType { contra: vec![1, 1], co: vec![0, 0] };
    let sig = gl(vec![1, 1], vec![t.clone()]);
    let x = MixedTensor::from_entries(&sig.spaces, t, Field::Q, [(vec![0, 0], Scalar::one())]).unwrap();
    let y = MergeSpaces.apply(&Instance::new(sig, vec![x]).unwrap()).unwrap();
    assert_eq!(y.signature.dims(), &[2]);
    let got: Vec<_> = y.tensors[0].entries().map(|(i, v)| (i, v.clone())).collect();
    assert_eq!(got, vec![(vec![0, 1], Scalar::one())]);
}

#[test]
fn merge_of_one_space_is_the_identity() {
    let sig = gl(vec![2], vec![ty(1, 1), ty(2, 1)]);
    let x = random_instance(7, &sig);
    assert_eq!(MergeSpaces.apply(&x).unwrap().tensors, x.tensors);
}

#[test]
fn merge_pullback_of_trace_is_exact() {
    let t = TensorType { contra: vec![1, 1], co: vec![1, 1] };
    let sig = gl(vec![2, 2], vec![t]);
    let g = ContractionInvariant::new(&sig, vec![2], vec![], vec![Perm::cycle(2), Perm::identity(2)]).unwrap();
    let pb = MergeSpaces.pullback(&sig, &g).unwrap();
    for seed in 0..5 {
        let x = random_instance(10 + seed, &sig);
        let y = MergeSpaces.apply(&x).unwrap();
        assert_eq!(evaluate(&pb.invariant, &y).unwrap(), &Scalar::from(pb.factor.clone()) * &evaluate(&g, &x).unwrap());
    }
}

#[test]
fn swap_gadget_in_one_space_is_the_transposition() {
    let sp = SpaceTuple::single(3).unwrap();
    let s = SwapGadget::gadget(&[3], 0).unwrap();
    assert_eq!(s, MixedTensor::permutation(&sp, 0, &Perm::transposition(2, 0, 1)).unwrap());
}

#[test]
fn swap_gadget_is_trivial_on_a_one_dimensional_slot() {
    let s = SwapGadget::gadget(&[1, 2], 0).unwrap();
    let sp = SpaceTuple::single(2).unwrap();
    assert_eq!(s.spaces().dims(), &[2]);
    let id2 = MixedTensor::identity_power(&sp, 0, 2).unwrap();
    let got: Vec<_> = s.entries().map(|(i, v)| (i, v.clone())).collect();
    let want: Vec<_> = id2.entries().map(|(i, v)| (i, v.clone())).collect();
    assert_eq!(got, want);
}

#[test]
fn collapse_shift_and_projection_small_cases() {
    let sp = SpaceTuple::single(2).unwrap();
    let (r, s) = CollapseSum::shift_and_projection(&sp, 2, 1).unwrap();
    assert_eq!(matrix_of(&r), Matrix::from_ints(&[&[0, 1], &[1, 0]]));
    assert_eq!(matrix_of(&s), Matrix::from_ints(&[&[1, 0], &[0, 0]]));
    let sp = SpaceTuple::single(3).unwrap();
    let (r, s) = CollapseSum::shift_and_projection(&sp, 1, 3).unwrap();
    assert_eq!(matrix_of(&r), Matrix::identity(3));
    assert_eq!(matrix_of(&s), Matrix::identity(3));
}

#[test]
fn detuple_uses_identity_then_transposition() {
    let sig = gl(vec![2], vec![ty(1, 1), ty(1, 1)]);
    let x = random_instance(20, &sig);
    let y = Detuple::with_degree(2).apply(&x).unwrap();
    let p_id = MixedTensor::permutation(&sig.spaces, 0, &Perm::identity(2)).unwrap();
    let p_12 = MixedTensor::permutation(&sig.spaces, 0, &Perm::transposition(2, 0, 1)).unwrap();
    let want = x.tensors[0].tensor_product(&p_id).unwrap().add(&x.tensors[1].tensor_product(&p_12).unwrap()).unwrap();
    assert_eq!(y.tensors, vec![want]);
}

#[test]
fn detuple_of_one_summand_with_degree_zero_is_the_identity() {
    let sig = gl(vec![2], vec![ty(2, 2)]);
    let x = random_instance(21, &sig);
    assert_eq!(Detuple::with_degree(0).apply(&x).unwrap().tensors, x.tensors);
}

#[test]
fn detuple_rejects_too_many_summands() {
    let sig = gl(vec![2], vec![ty(1, 1); 3]);
    assert!(Detuple::with_degree(2).apply(&random_instance(22, &sig)).is_err());
}

#[test]
fn rank_embed_with_zero_input_is_zero() {
    let sig = gl(vec![2], vec![ty(2, 2), ty(1, 1), ty(1, 1)]);
    let y = RankEmbed.apply(&Instance::zero(sig).unwrap()).unwrap();
    assert!(y.tensors.iter().all(|t| t.is_zero()));
}

#[test]
fn rank_embed_of_identity_is_identity_times_swap() {
    let sig = gl(vec![2], vec![ty(2, 2), ty(1, 1), ty(1, 1)]);
    let id = MixedTensor::identity(&sig.spaces, 0).unwrap();
    let mut x = Instance::zero(sig.clone()).unwrap();
    x.tensors[1] = id.clone();
    let y = RankEmbed.apply(&x).unwrap();
    let p = MixedTensor::permutation(&sig.spaces, 0, &Perm::transposition(2, 0, 1)).unwrap();
    assert_eq!(y.tensors[0], id.tensor_product(&p).unwrap());
    assert!(y.tensors[1].is_zero());
}

#[test]
fn hyperbolic_forms_in_dimension_two() {
    assert_eq!(hyperbolic_form(1, false), Matrix::from_ints(&[&[0, 1], &[1, 0]]));
    assert_eq!(hyperbolic_form(1, true), Matrix::from_ints(&[&[0, 1], &[-1, 0]]));
}

#[test]
fn gl_to_form_attaches_the_hyperbolic_form() {
    let sig = gl(vec![1], vec![ty(1, 1)]);
    for (r, skew) in [(GlToForm::orthogonal(), false), (GlToForm::symplectic(), true)] {
        let tgt = r.target_signature(&sig).unwrap();
        assert_eq!(tgt.dims(), &[2]);
        assert_eq!(tgt.forms.as_ref().unwrap()[0], hyperbolic_form(1, skew));
    }
}

#[test]
fn gl_to_form_lifts_diag_two() {
    let sig = gl(vec![1], vec![ty(1, 1)]);
    let g = GroupElement::new(GroupTag::GL, vec![Matrix::from_ints(&[&[2]])], None).unwrap();
    let lifted = GlToForm::orthogonal().lift_group(&sig, &g).unwrap();
    let want = Matrix::diagonal(vec![Scalar::from_int(2), Scalar::frac(1, 2)]);
    assert_eq!(lifted.matrices()[0], want);
    let h = hyperbolic_form(1, false);
    assert_eq!(want.transpose().mul(&h).unwrap().mul(&want).unwrap(), h);
}

#[test]
fn gl_to_form_pullback_of_trace() {
    let sig = gl(vec![2], vec![ty(1, 1)]);
    let r = GlToForm::orthogonal();
    let g = trace(&sig, 0);
    let pb = r.pullback(&sig, &g).unwrap();
    for seed in 0..5 {
        let x = random_instance(30 + seed, &sig);
        let y = r.apply(&x).unwrap();
        assert_eq!(evaluate(&pb.invariant, &y).unwrap(), &Scalar::from(pb.factor.clone()) * &evaluate(&g, &x).unwrap());
    }
}

#[test]
fn form_to_gl_appends_the_form() {
    let forms = Some(vec![Matrix::identity(2)]);
    let sig = Signature::new(SpaceTuple::single(2).unwrap(), GroupTag::O, Field::Q, vec![ty(2, 0)], forms).unwrap();
    let y = FormToGl.apply(&random_instance(40, &sig)).unwrap();
    assert_eq!(y.signature.group, GroupTag::GL);
    assert_eq!(y.signature.types, vec![ty(2, 0), ty(0, 2)]);
    assert_eq!(matrix_of(&y.tensors[1]), Matrix::identity(2));

    let j = hyperbolic_form(1, true);
    let sig = Signature::new(SpaceTuple::single(2).unwrap(), GroupTag::Sp, Field::Q, vec![ty(1, 0)], Some(vec![j.clone()])).unwrap();
    let y = FormToGl.apply(&random_instance(41, &sig)).unwrap();
    assert_eq!(matrix_of(&y.tensors[1]), j);
}

#[test]
fn cube_form_is_the_interleaved_fourth_power() {
    let g = Matrix::from_ints(&[&[1, 2], &[0, 3]]);
    let sp = SpaceTuple::single(2).unwrap();
    let gt = MixedTensor::from_entries(
        &sp,
        ty(0, 2),
        Field::Q,
        (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (vec![i, j], g.get(i, j).clone())),
    )
    .unwrap();
    let g4 = (0..3).fold(gt.clone(), |acc, _| acc.tensor_product(&gt).unwrap());
    let sigma = Perm::from_one_based(&[1, 5, 2, 6, 3, 7, 4, 8]).unwrap();
    let h = g4.permute_factors(&[(Perm::identity(0), sigma)]).unwrap();
    let hm = cube_form(&g);
    let radix = |ix: &[usize]| ix.iter().fold(0, |a, &i| a * 2 + i);
    for (idx, v) in h.entries() {
        assert_eq!(hm.get(radix(&idx[..4]), radix(&idx[4..])), v);
    }
    let nonzero = (0..16).flat_map(|r| (0..16).map(move |c| (r, c))).filter(|&(r, c)| !hm.get(r, c).is_zero()).count();
    assert_eq!(nonzero, h.nnz());
}

#[test]
fn gi_encodings_of_small_graphs() {
    let k2 = gi_encode(&Graph::complete(2), GiMode::Sn).unwrap();
    let got: Vec<_> = k2.tensors[0].entries().map(|(i, _)| i).collect();
    assert_eq!(got, vec![vec![0, 1], vec![1, 0]]);
    let p3 = gi_encode(&Graph::path(3), GiMode::Gl).unwrap();
    assert_eq!(p3.signature.group, GroupTag::GL);
    assert_eq!(p3.signature.types, vec![ty(2, 0), ty(3, 0), ty(0, 2)]);
    let nnz: Vec<usize> = p3.tensors.iter().map(|t| t.nnz()).collect();
    assert_eq!(nnz, vec![4, 3, 3]);
}

#[test]
fn relabelled_edge_is_in_the_same_orbit() {
    let g = Graph::new(3, [(0, 1)]).unwrap();
    let sigma = Perm::cycle(3);
    let x = gi_encode(&g, GiMode::Sn).unwrap();
    let y = gi_encode(&g.relabel(&sigma).unwrap(), GiMode::Sn).unwrap();
    let w = sn_orbit_oracle(&x, &y, 8).unwrap().expect("witness");
    assert_eq!(x.apply_group(&GroupElement::from_permutations(&[w]).unwrap()).unwrap(), y);
}

#[test]
fn graph_rejects_self_loops() {
    assert!(Graph::new(2, [(1, 1)]).is_err());
    assert!("n 2\n1 1\n".parse::<Graph>().is_err());
}

#[test]
fn gi_to_peps_on_an_edge() {
    let x = gi_encode(&Graph::complete(2), GiMode::Sn).unwrap();
    let y = pipeline("gi-to-peps").unwrap().apply(&x).unwrap();
    let t = TensorType { contra: vec![1, 1], co: vec![1, 1] };
    assert_eq!(y.signature.types, vec![t; 8]);
}

#[test]
fn empty_pipeline_is_the_identity() {
    let sig = gl(vec![2], vec![ty(1, 1), ty(2, 0)]);
    let x = random_instance(50, &sig);
    let p = pipeline("").unwrap();
    assert!(p.is_empty());
    assert_eq!(p.apply(&x).unwrap(), x);
}

#[test]
fn x44_gives_a_single_four_four_summand() {
    let sig = gl(vec![2], vec![ty(2, 2), ty(2, 2)]);
    let y = pipeline("x44").unwrap().apply(&random_instance(51, &sig)).unwrap();
    assert_eq!(y.signature.types, vec![ty(4, 4)]);
}

#[test]
fn pipeline_reports_the_failing_stage() {
    let forms = Some(vec![Matrix::identity(2)]);
    let sig = Signature::new(SpaceTuple::single(2).unwrap(), GroupTag::O, Field::Q, vec![ty(1, 1)], forms).unwrap();
    let err = pipeline("x44").unwrap().apply(&random_instance(52, &sig)).unwrap_err().to_string();
    assert!(err.contains("x44") || err.contains("detuple"), "{err}");
}

#[test]
fn every_named_step_resolves() {
    for &name in reduction_catalog::step_names() {
        assert_eq!(step(name).unwrap().name(), name);
    }
    assert!(step("no_such_step").is_err());
}

fn qi(sig_types: Vec<TensorType>, dim: usize) -> Signature {
    Signature::new(SpaceTuple::single(dim).unwrap(), GroupTag::U, Field::Qi, sig_types, None).unwrap()
}

#[test]
fn unitary_lift_of_real_data_only_dualizes() {
    let sig = qi(vec![ty(1, 1)], 2);
    let real = random_instance(60, &gl(vec![2], vec![ty(1, 1)])).tensors[0].to_field(Field::Qi).unwrap();
    let y = UnitaryLift.apply(&Instance::new(sig, vec![real.clone()]).unwrap()).unwrap();
    assert_eq!(y.tensors[1], real.dualize());
}

#[test]
fn unitary_lift_conjugates_a_vector() {
    let sig = qi(vec![ty(1, 0)], 1);
    let v = &Scalar::from_int(3) + &(&Scalar::i() * &Scalar::from_int(2));
    let x = MixedTensor::from_entries(&sig.spaces, ty(1, 0), Field::Qi, [(vec![0], v.clone())]).unwrap();
    let y = UnitaryLift.apply(&Instance::new(sig, vec![x]).unwrap()).unwrap();
    assert_eq!(y.signature.types, vec![ty(1, 0), ty(0, 1)]);
    assert_eq!(y.tensors[1].get(&[0]).unwrap(), v.conj());
    assert!(!UnitaryLift.polynomial());
}

#[test]
fn unitary_pairing_is_the_squared_norm() {
    let sig = qi(vec![ty(1, 0)], 3);
    for seed in 0..5 {
        let x = random_instance(70 + seed, &sig);
        let y = UnitaryLift.apply(&x).unwrap();
        let pair = y.tensors[0].tensor_product(&y.tensors[1]).unwrap().full_trace(&[Perm::identity(1)]).unwrap();
        let norm = x.tensors[0].entries().fold(Scalar::zero(), |acc, (_, v)| &acc + &Scalar::from(v.norm_sqr()));
        assert_eq!(pair, norm);
    }
}
