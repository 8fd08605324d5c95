use std::fmt;

use crate::error::TensorError;
use crate::perm::Perm;
use crate::scalar::{Field, Scalar};

/// Dense exact matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, TensorError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(TensorError::TypeMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect())
            .expect("rectangular")
    }

    /// Matrix of `e_j ↦ e_{σ(j)}`.
    pub fn permutation(sigma: &Perm) -> Self {
        let n = sigma.len();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            m.set(sigma.apply(j), j, Scalar::one());
        }
        m
    }

    pub fn diagonal(d: Vec<Scalar>) -> Self {
        let n = d.len();
        let mut m = Matrix::zeros(n, n);
        for (i, v) in d.into_iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn field(&self) -> Field {
        if self.data.iter().any(|v| v.field() == Field::Qi) {
            Field::Qi
        } else {
            Field::Q
        }
    }

    pub fn to_field(&self, field: Field) -> Result<Matrix, TensorError> {
        let data = self.data.iter().map(|v| v.to_field(field)).collect::<Result<_, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.im() == num_rational::BigRational::from_integer(0.into()))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    pub fn conj_transpose(&self) -> Matrix {
        self.transpose().conj()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, TensorError> {
        if self.cols != other.rows {
            return Err(TensorError::TypeMismatch(format!(
                "matrix product {}x{} · {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = &m.data[r * other.cols + c] + &(a * b);
                        m.data[r * other.cols + c] = v;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, TensorError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(TensorError::TypeMismatch("matrix sum shape".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, TensorError> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| if r == c { self.get(r, c).is_one() } else { self.get(r, c).is_zero() })
            })
    }

    /// Kronecker product; the first factor is the most significant index.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if !b.is_zero() {
                            m.set(r1 * other.rows + r2, c1 * other.cols + c2, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Row echelon form by exact Gaussian elimination; returns (rank, determinant sign/product).
    fn eliminate(&self) -> (Matrix, usize, Scalar) {
        let mut a = self.clone();
        let mut det = Scalar::one();
        let mut rank = 0;
        for c in 0..a.cols {
            let Some(p) = (rank..a.rows).find(|&r| !a.get(r, c).is_zero()) else {
                det = Scalar::zero();
                continue;
            };
            if p != rank {
                for k in 0..a.cols {
                    a.data.swap(p * a.cols + k, rank * a.cols + k);
                }
                det = -det;
            }
            let piv = a.get(rank, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for r in rank + 1..a.rows {
                let f = a.get(r, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for k in c..a.cols {
                    let v = a.get(r, k) - &(&f * a.get(rank, k));
                    a.set(r, k, v);
                }
            }
            rank += 1;
        }
        (a, rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().1
    }

    pub fn det(&self) -> Result<Scalar, TensorError> {
        if !self.is_square() {
            return Err(TensorError::TypeMismatch("determinant of non-square matrix".into()));
        }
        let (_, rank, det) = self.eliminate();
        Ok(if rank < self.rows { Scalar::zero() } else { det })
    }

    pub fn inverse(&self) -> Result<Matrix, TensorError> {
        if !self.is_square() {
            return Err(TensorError::TypeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero()).ok_or(TensorError::Singular)?;
            if p != c {
                for k in 0..n {
                    a.data.swap(p * n + k, c * n + k);
                    inv.data.swap(p * n + k, c * n + k);
                }
            }
            let pinv = a.get(c, c).inv().expect("nonzero pivot");
            for k in 0..n {
                let v = a.get(c, k) * &pinv;
                a.set(c, k, v);
                let v = inv.get(c, k) * &pinv;
                inv.set(c, k, v);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let v = a.get(r, k) - &(&f * a.get(c, k));
                    a.set(r, k, v);
                    let v = inv.get(r, k) - &(&f * inv.get(c, k));
                    inv.set(r, k, v);
                }
            }
        }
        Ok(inv)
    }

    /// Nonzero entries of column `c` as `(row, value)`.
    pub(crate) fn column_support(&self, c: usize) -> Vec<(usize, Scalar)> {
        (0..self.rows).filter(|&r| !self.get(r, c).is_zero()).map(|r| (r, self.get(r, c).clone())).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_ints(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det().unwrap(), Scalar::from_int(1));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let s = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(TensorError::Singular));
        assert_eq!(s.rank(), 1);
        assert_eq!(s.det().unwrap(), Scalar::zero());
    }

    #[test]
    fn kron_indexing() {
        let a = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        let b = Matrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.get(2, 0), &Scalar::from_int(3));
        assert_eq!(k.get(3, 1), &Scalar::from_int(3));
        assert_eq!(k.get(0, 1), &Scalar::zero());
    }

    #[test]
    fn permutation_matrix_maps_basis() {
        let s = Perm::new(vec![1, 2, 0]).unwrap();
        let p = Matrix::permutation(&s);
        assert!(p.get(1, 0).is_one() && p.get(2, 1).is_one() && p.get(0, 2).is_one());
    }
}
