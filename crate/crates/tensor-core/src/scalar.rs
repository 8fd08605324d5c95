use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::TensorError;

/// Coefficient field of a tensor or instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Q,
    Qi,
}

impl Field {
    pub fn join(self, other: Field) -> Field {
        self.max(other)
    }
}

/// Exact scalar in Q or Q(i).
///
/// Equality is numeric: a Q(i) value with zero imaginary part equals the matching Q value.
#[derive(Clone)]
pub enum Scalar {
    Q(BigRational),
    Qi(BigRational, BigRational),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Q(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Q(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Q(BigRational::from_integer(n))
    }

    /// `n/d`; panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Q(rat(n, d))
    }

    pub fn complex(re: BigRational, im: BigRational) -> Self {
        Scalar::Qi(re, im)
    }

    pub fn i() -> Self {
        Scalar::Qi(BigRational::zero(), BigRational::one())
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Qi(..) => Field::Qi,
        }
    }

    pub fn re(&self) -> &BigRational {
        match self {
            Scalar::Q(r) | Scalar::Qi(r, _) => r,
        }
    }

    pub fn im(&self) -> BigRational {
        match self {
            Scalar::Q(_) => BigRational::zero(),
            Scalar::Qi(_, i) => i.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Qi(r, i) => r.is_zero() && i.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Qi(r, i) => r.is_one() && i.is_zero(),
        }
    }

    /// Same value tagged with `field`; fails when a nonreal value is pushed into Q.
    pub fn to_field(&self, field: Field) -> Result<Scalar, TensorError> {
        match (self, field) {
            (Scalar::Q(r), Field::Q) => Ok(Scalar::Q(r.clone())),
            (Scalar::Q(r), Field::Qi) => Ok(Scalar::Qi(r.clone(), BigRational::zero())),
            (Scalar::Qi(r, i), Field::Q) if i.is_zero() => Ok(Scalar::Q(r.clone())),
            (Scalar::Qi(..), Field::Q) => Err(TensorError::FieldMismatch),
            (Scalar::Qi(r, i), Field::Qi) => Ok(Scalar::Qi(r.clone(), i.clone())),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(r.clone()),
            Scalar::Qi(r, i) => Scalar::Qi(r.clone(), -i),
        }
    }

    /// `|z|^2`, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        match self {
            Scalar::Q(r) => r * r,
            Scalar::Qi(r, i) => r * r + i * i,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Qi(r, i) => {
                let n = r * r + i * i;
                Scalar::Qi(r / &n, -(i / &n))
            }
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = match self.field() {
            Field::Q => Scalar::one(),
            Field::Qi => Scalar::one().to_field(Field::Qi).unwrap(),
        };
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a == b,
            _ => self.re() == other.re() && self.im() == other.im(),
        }
    }
}

impl Eq for Scalar {}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Q(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Q(a), Scalar::Qi(c, d)) => Scalar::Qi(a + c, d.clone()),
            (Scalar::Qi(a, b), Scalar::Q(c)) => Scalar::Qi(a + c, b.clone()),
            (Scalar::Qi(a, b), Scalar::Qi(c, d)) => Scalar::Qi(a + c, b + d),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Q(a), Scalar::Qi(c, d)) => Scalar::Qi(a * c, a * d),
            (Scalar::Qi(a, b), Scalar::Q(c)) => Scalar::Qi(a * c, b * c),
            (Scalar::Qi(a, b), Scalar::Qi(c, d)) => Scalar::Qi(a * c - b * d, a * d + b * c),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Qi(a, b) => Scalar::Qi(-a, -b),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            (Scalar::Qi(a, _), Scalar::Q(c)) => *a += c,
            (Scalar::Qi(a, b), Scalar::Qi(c, d)) => {
                *a += c;
                *b += d;
            }
            _ => *self = &*self + rhs,
        }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Qi(r, i) => {
                let sign = if i.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{} i", fmt_rat(r), sign, fmt_rat(&i.abs()))
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = TensorError;

    /// Accepts `p`, `p/q`, `p/q+r/s i`, `p/q-r/s i` and `r/s i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TensorError::ParseScalar(s.to_string());
        let t = s.trim();
        let Some(body) = t.strip_suffix('i') else {
            return parse_rat(t).map(Scalar::Q).ok_or_else(err);
        };
        let body = body.trim_end();
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .last()
            .map(|(k, _)| k);
        let (re, im) = match split {
            Some(k) => {
                let re = parse_rat(&body[..k]).ok_or_else(err)?;
                let im_str = body[k..].trim();
                let im = match im_str {
                    "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    _ => parse_rat(im_str.trim_start_matches('+')).ok_or_else(err)?,
                };
                (re, im)
            }
            None => {
                let im = match body.trim() {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    other => parse_rat(other).ok_or_else(err)?,
                };
                (BigRational::zero(), im)
            }
        };
        Ok(Scalar::Qi(re, im))
    }
}
