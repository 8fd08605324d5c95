use invariant_engine::{Instance, Signature};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensor_core::{Field, GroupElement, GroupTag, Matrix, MixedTensor, Perm, Scalar, SpaceTuple, TensorType};

use crate::Result;

/// Dense enumeration bound; larger tensors get a fixed number of sampled entries.
const DENSE_LIMIT: u64 = 1 << 16;
const SAMPLED_ENTRIES: usize = 4096;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under report seed `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed.wrapping_add(trial))
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, trial))
}

fn rational<R: Rng>(rng: &mut R) -> BigRational {
    let num: i64 = rng.gen_range(-2..=2);
    let den: i64 = [1, 2, 3][rng.gen_range(0..3)];
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Numerator in −2..=2, denominator in {1, 2, 3}; both parts for Q(i).
pub fn random_scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    match field {
        Field::Q => Scalar::from(rational(rng)),
        Field::Qi => Scalar::complex(rational(rng), rational(rng)),
    }
}

fn nonzero_scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    loop {
        let s = random_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Each entry present with probability one half.
pub fn random_tensor<R: Rng>(rng: &mut R, sp: &SpaceTuple, ttype: &TensorType, field: Field) -> Result<MixedTensor> {
    let mut dims = Vec::new();
    for i in 0..ttype.spaces() {
        dims.extend(std::iter::repeat_n(sp.dim(i), ttype.contra[i] + ttype.co[i]));
    }
    let total = dims.iter().try_fold(1u64, |a, &d| a.checked_mul(d as u64)).unwrap_or(u64::MAX);
    let mut entries = Vec::new();
    if total <= DENSE_LIMIT {
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..total {
            if rng.gen_bool(0.5) {
                entries.push((idx.clone(), nonzero_scalar(rng, field)));
            }
            for k in (0..dims.len()).rev() {
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    } else {
        for _ in 0..SAMPLED_ENTRIES {
            let idx = dims.iter().map(|&d| rng.gen_range(0..d)).collect();
            entries.push((idx, nonzero_scalar(rng, field)));
        }
    }
    Ok(MixedTensor::from_entries(sp, ttype.clone(), field, entries)?)
}

pub fn random_instance<R: Rng>(rng: &mut R, sig: &Signature) -> Result<Instance> {
    let tensors = sig
        .types
        .iter()
        .map(|t| random_tensor(rng, &sig.spaces, t, sig.field))
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance::new(sig.clone(), tensors)?)
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Perm {
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    Perm::new(img).expect("shuffle is bijective")
}

fn random_matrix<R: Rng>(rng: &mut R, n: usize, field: Field) -> Matrix {
    let rows = (0..n).map(|_| (0..n).map(|_| random_scalar(rng, field)).collect()).collect();
    Matrix::from_rows(rows).expect("square")
}

fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let rows = (0..n).map(|_| vec![random_scalar(rng, Field::Q)]).collect();
    Matrix::from_rows(rows).expect("column")
}

fn invertible<R: Rng>(rng: &mut R, n: usize, field: Field) -> Matrix {
    loop {
        let m = random_matrix(rng, n, field);
        if m.det().map(|d| !d.is_zero()).unwrap_or(false) {
            return m;
        }
    }
}

/// Product of reflections `x ↦ x − 2 (vᵀGx / vᵀGv) v`.
fn orthogonal<R: Rng>(rng: &mut R, form: &Matrix) -> Matrix {
    let n = form.rows();
    let mut acc = Matrix::identity(n);
    for _ in 0..rng.gen_range(1..=3) {
        let v = random_vector(rng, n);
        let gv = v.transpose().mul(form).expect("shape");
        let q = gv.mul(&v).expect("shape").get(0, 0).clone();
        let Some(qi) = q.inv() else { continue };
        let r = Matrix::identity(n).sub(&v.mul(&gv).expect("shape").scale(&(Scalar::from_int(2) * qi))).expect("shape");
        acc = acc.mul(&r).expect("shape");
    }
    acc
}

/// Product of transvections `x ↦ x + c (vᵀGx) v`.
fn symplectic<R: Rng>(rng: &mut R, form: &Matrix) -> Matrix {
    let n = form.rows();
    let mut acc = Matrix::identity(n);
    for _ in 0..rng.gen_range(1..=3) {
        let v = random_vector(rng, n);
        let c = nonzero_scalar(rng, Field::Q);
        let t = Matrix::identity(n).add(&v.mul(&v.transpose().mul(form).expect("shape")).expect("shape").scale(&c)).expect("shape");
        acc = acc.mul(&t).expect("shape");
    }
    acc
}

fn unitary<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let phases = [
        Scalar::one(),
        Scalar::from_int(-1),
        Scalar::i(),
        -Scalar::i(),
        Scalar::complex(BigRational::new(3.into(), 5.into()), BigRational::new(4.into(), 5.into())),
        Scalar::complex(BigRational::new(3.into(), 5.into()), BigRational::new((-4).into(), 5.into())),
    ];
    let d = Matrix::diagonal((0..n).map(|_| phases[rng.gen_range(0..phases.len())].clone()).collect());
    let mut acc = Matrix::permutation(&random_perm(rng, n)).mul(&d).expect("shape");
    if n >= 2 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n - 1));
        let b = if b >= a { b + 1 } else { b };
        let mut giv = Matrix::identity(n);
        let (c, s) = (Scalar::frac(3, 5), Scalar::frac(4, 5));
        giv.set(a, a, c.clone());
        giv.set(b, b, c);
        giv.set(a, b, -s.clone());
        giv.set(b, a, s);
        acc = acc.mul(&giv).expect("shape");
    }
    acc.to_field(Field::Qi).expect("field")
}

/// Random element of the group of `sig`, one matrix per space.
pub fn random_group_element<R: Rng>(rng: &mut R, sig: &Signature) -> Result<GroupElement> {
    let dims = sig.dims();
    let mats: Vec<Matrix> = (0..dims.len())
        .map(|i| match sig.group {
            GroupTag::GL => invertible(rng, dims[i], Field::Q),
            GroupTag::O => orthogonal(rng, &sig.forms.as_ref().expect("forms")[i]),
            GroupTag::Sp => symplectic(rng, &sig.forms.as_ref().expect("forms")[i]),
            GroupTag::Sn => Matrix::permutation(&random_perm(rng, dims[i])),
            GroupTag::U => unitary(rng, dims[i]),
        })
        .collect();
    Ok(GroupElement::new(sig.group, mats, sig.forms.clone())?)
}
