#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensor_core::{Field, GroupElement, GroupTag, Matrix, MixedTensor, Perm, Scalar, SpaceTuple, TensorType};

use invariant_engine::{Instance, Signature};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(r: &mut ChaCha8Rng) -> Scalar {
    if r.gen_bool(0.4) {
        Scalar::zero()
    } else {
        Scalar::from_int(r.gen_range(-2..=2))
    }
}

pub fn random_tensor(r: &mut ChaCha8Rng, spaces: &SpaceTuple, t: &TensorType, field: Field) -> MixedTensor {
    let dims = MixedTensor::zero(spaces, t.clone(), field).unwrap().factor_dims();
    let mut entries = Vec::new();
    let mut idx = vec![0; dims.len()];
    loop {
        let mut v = small(r);
        if field == Field::Qi {
            v = &v + &(&small(r) * &Scalar::i());
        }
        entries.push((idx.clone(), v));
        let mut k = 0;
        while k < dims.len() {
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == dims.len() {
            break;
        }
    }
    MixedTensor::from_entries(spaces, t.clone(), field, entries).unwrap()
}

pub fn random_instance(r: &mut ChaCha8Rng, sig: &Signature) -> Instance {
    let ts = sig.types.iter().map(|t| random_tensor(r, &sig.spaces, t, sig.field)).collect();
    Instance::new(sig.clone(), ts).unwrap()
}

pub fn j_form(n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for b in (0..n).step_by(2) {
        m.set(b, b + 1, Scalar::one());
        m.set(b + 1, b, Scalar::from_int(-1));
    }
    m
}

pub fn standard_forms(group: GroupTag, dims: &[usize]) -> Option<Vec<Matrix>> {
    match group {
        GroupTag::O => Some(
            dims.iter()
                .map(|&n| Matrix::diagonal((0..n).map(|k| Scalar::from_int(if k == 1 { 2 } else { 1 })).collect()))
                .collect(),
        ),
        GroupTag::Sp => Some(dims.iter().map(|&n| j_form(n)).collect()),
        _ => None,
    }
}

fn random_perm(r: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        v.swap(k, r.gen_range(0..=k));
    }
    Perm::new(v).unwrap()
}

fn rotation(n: usize, a: usize, b: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    m.set(a, a, Scalar::frac(3, 5));
    m.set(b, b, Scalar::frac(3, 5));
    m.set(a, b, Scalar::frac(-4, 5));
    m.set(b, a, Scalar::frac(4, 5));
    m
}

fn random_matrix(r: &mut ChaCha8Rng, tag: GroupTag, n: usize, form: Option<&Matrix>) -> Matrix {
    let mut g = Matrix::identity(n);
    for _ in 0..3 {
        let step = match tag {
            GroupTag::GL => {
                let mut e = Matrix::identity(n);
                let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
                if a == b {
                    e.set(a, a, Scalar::from_int([-1, 2][r.gen_range(0..2)]));
                } else {
                    e.set(a, b, Scalar::from_int(r.gen_range(-2..=2)));
                }
                e.mul(&Matrix::permutation(&random_perm(r, n))).unwrap()
            }
            GroupTag::O => {
                let form = form.unwrap();
                let v = Matrix::from_rows((0..n).map(|_| vec![Scalar::from_int(r.gen_range(-1..=2))]).collect()).unwrap();
                let gv = form.mul(&v).unwrap();
                let q = v.transpose().mul(&gv).unwrap().get(0, 0).clone();
                if q.is_zero() {
                    Matrix::identity(n)
                } else {
                    let c = (&Scalar::from_int(-2) * &q.inv().unwrap()).clone();
                    Matrix::identity(n).add(&v.mul(&gv.transpose()).unwrap().scale(&c)).unwrap()
                }
            }
            GroupTag::Sp => {
                let form = form.unwrap();
                let v = Matrix::from_rows((0..n).map(|_| vec![Scalar::from_int(r.gen_range(-1..=1))]).collect()).unwrap();
                let a = Scalar::from_int([-1, 1][r.gen_range(0..2)]);
                Matrix::identity(n).add(&v.mul(&v.transpose()).unwrap().mul(form).unwrap().scale(&a)).unwrap()
            }
            GroupTag::Sn => Matrix::permutation(&random_perm(r, n)),
            GroupTag::U => {
                let mut d = Matrix::identity(n);
                let k = r.gen_range(0..n);
                d.set(k, k, Scalar::i().pow(r.gen_range(0..4)));
                let p = Matrix::permutation(&random_perm(r, n));
                let rot = if n >= 2 {
                    let a = r.gen_range(0..n);
                    let b = (a + 1 + r.gen_range(0..n - 1)) % n;
                    rotation(n, a, b)
                } else {
                    Matrix::identity(n)
                };
                d.mul(&p).unwrap().mul(&rot).unwrap()
            }
        };
        g = g.mul(&step).unwrap();
    }
    g
}

pub fn random_element(r: &mut ChaCha8Rng, sig: &Signature) -> GroupElement {
    let mats = (0..sig.m())
        .map(|i| random_matrix(r, sig.group, sig.dims()[i], sig.forms.as_ref().map(|f| &f[i])))
        .collect();
    GroupElement::new(sig.group, mats, sig.forms.clone()).unwrap()
}

pub fn field_for(group: GroupTag) -> Field {
    if group == GroupTag::U {
        Field::Qi
    } else {
        Field::Q
    }
}

pub fn even_dims(group: GroupTag, dims: Vec<usize>) -> Vec<usize> {
    if group == GroupTag::Sp {
        dims.into_iter().map(|n| n + n % 2).collect()
    } else {
        dims
    }
}

pub fn signature(group: GroupTag, dims: Vec<usize>, types: Vec<TensorType>) -> Signature {
    let dims = even_dims(group, dims);
    let forms = standard_forms(group, &dims);
    Signature::new(SpaceTuple::new(dims).unwrap(), group, field_for(group), types, forms).unwrap()
}

/// `x ∈ (V)^{⊗2}` with `x_{uv} = 1` on both orientations of each edge; vertices 1-based.
pub fn graph_instance(n: usize, edges: &[(usize, usize)]) -> Instance {
    let sig = Signature::new(SpaceTuple::single(n).unwrap(), GroupTag::Sn, Field::Q, vec![TensorType::single(2, 0)], None).unwrap();
    let mut e = Vec::new();
    for &(u, v) in edges {
        e.push((vec![u - 1, v - 1], Scalar::one()));
        e.push((vec![v - 1, u - 1], Scalar::one()));
    }
    let x = MixedTensor::from_entries(&sig.spaces, TensorType::single(2, 0), Field::Q, e).unwrap();
    Instance::new(sig, vec![x]).unwrap()
}
