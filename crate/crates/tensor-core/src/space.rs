use std::fmt;

use crate::error::TensorError;

/// Dimensions `n_1, …, n_m` of the coordinate spaces `V_i = F^{n_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceTuple {
    dims: Vec<usize>,
}

impl SpaceTuple {
    pub fn new(dims: Vec<usize>) -> Result<Self, TensorError> {
        if dims.is_empty() {
            return Err(TensorError::InvalidSpaces("no spaces".into()));
        }
        if dims.contains(&0) {
            return Err(TensorError::InvalidSpaces(format!("zero dimension in {dims:?}")));
        }
        Ok(SpaceTuple { dims })
    }

    pub fn single(n: usize) -> Result<Self, TensorError> {
        SpaceTuple::new(vec![n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }
}

/// Per-space contravariant and covariant factor counts `(a; b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorType {
    pub contra: Vec<usize>,
    pub co: Vec<usize>,
}

impl TensorType {
    pub fn new(contra: Vec<usize>, co: Vec<usize>) -> Result<Self, TensorError> {
        if contra.len() != co.len() {
            return Err(TensorError::TypeMismatch(format!(
                "contra length {} vs co length {}",
                contra.len(),
                co.len()
            )));
        }
        Ok(TensorType { contra, co })
    }

    /// Type of a tensor over a single space.
    pub fn single(a: usize, b: usize) -> Self {
        TensorType { contra: vec![a], co: vec![b] }
    }

    pub fn zero(m: usize) -> Self {
        TensorType { contra: vec![0; m], co: vec![0; m] }
    }

    /// `a·e_i ; b·e_i` over `m` spaces.
    pub fn unit(m: usize, i: usize, a: usize, b: usize) -> Self {
        let mut t = TensorType::zero(m);
        t.contra[i] = a;
        t.co[i] = b;
        t
    }

    pub fn spaces(&self) -> usize {
        self.contra.len()
    }

    pub fn sum(&self, other: &TensorType) -> TensorType {
        TensorType {
            contra: self.contra.iter().zip(&other.contra).map(|(a, b)| a + b).collect(),
            co: self.co.iter().zip(&other.co).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.contra == self.co
    }

    /// Covariant and contravariant roles exchanged.
    pub fn dual(&self) -> TensorType {
        TensorType { contra: self.co.clone(), co: self.contra.clone() }
    }

    pub fn total_factors(&self) -> usize {
        self.contra.iter().sum::<usize>() + self.co.iter().sum::<usize>()
    }

    /// Factor offset of the contravariant block of space `i`.
    pub fn contra_offset(&self, i: usize) -> usize {
        (0..i).map(|j| self.contra[j] + self.co[j]).sum()
    }

    /// Factor offset of the covariant block of space `i`.
    pub fn co_offset(&self, i: usize) -> usize {
        self.contra_offset(i) + self.contra[i]
    }

    /// Space index of every factor, in factor order.
    pub fn factor_spaces(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.total_factors());
        for i in 0..self.spaces() {
            v.extend(std::iter::repeat_n(i, self.contra[i] + self.co[i]));
        }
        v
    }
}

impl fmt::Display for TensorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.spaces() == 1 {
            write!(f, "({};{})", self.contra[0], self.co[0])
        } else {
            write!(f, "(({});({}))", j(&self.contra), j(&self.co))
        }
    }
}
