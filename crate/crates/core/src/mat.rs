// SPDX-License-Identifier: MIT OR Apache-2.0
//! Dense matrices over exact fields.

use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{Field, OrderedField, Ring};

/// Failures of matrix operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatError {
    /// Operand shapes do not fit together.
    DimensionMismatch,
    /// The operation needs a square matrix.
    NotSquare,
    /// The operation needs a symmetric matrix.
    NotSymmetric,
}

impl fmt::Display for MatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatError::DimensionMismatch => f.write_str("matrix dimension mismatch"),
            MatError::NotSquare => f.write_str("matrix is not square"),
            MatError::NotSymmetric => f.write_str("matrix is not symmetric"),
        }
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Ring> Mat<F> {
    /// The `rows × cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: alloc::vec![F::zero(); rows * cols] }
    }

    /// The `n × n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from its rows, which must all have the same length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, MatError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatError::DimensionMismatch);
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a `rows × cols` matrix from an entry function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    /// Overwrites entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// All rows, cloned.
    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Matrix product.
    pub fn mul(&self, other: &Self) -> Result<Self, MatError> {
        if self.cols != other.rows {
            return Err(MatError::DimensionMismatch);
        }
        Ok(Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc = acc.add(&a.mul(other.get(k, j)));
                }
            }
            acc
        }))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[F]) -> Result<Vec<F>, MatError> {
        if v.len() != self.cols {
            return Err(MatError::DimensionMismatch);
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(F::zero(), |acc, (a, b)| if a.is_zero() { acc } else { acc.add(&a.mul(b)) }))
            .collect())
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Result<Self, MatError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatError::DimensionMismatch);
        }
        Ok(Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() })
    }

    /// Product with a scalar.
    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Entrywise image under `f`.
    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Whether the matrix is square and equal to its transpose.
    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Whether every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    /// Submatrix on the given row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<F: Field> Mat<F> {
    /// Reduced row echelon form and its pivot columns in increasing order.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let p = match (r..m.rows).find(|&i| !m.get(i, c).is_zero()) {
                Some(p) => p,
                None => continue,
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space.
    ///
    /// One vector per free column `f`, carrying `1` at `f`, zero at the other
    /// free columns and the negated reduced entries at the pivot columns.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = alloc::vec![F::zero(); self.cols];
            v[f] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, f).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<F, MatError> {
        if self.rows != self.cols {
            return Err(MatError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let p = match (c..n).find(|&i| !m.get(i, c).is_zero()) {
                Some(p) => p,
                None => return Ok(F::zero()),
            };
            if p != c {
                m.swap_rows(c, p);
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse, `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>, MatError> {
        if self.rows != self.cols {
            return Err(MatError::NotSquare);
        }
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        Ok(Some(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone())))
    }

    /// Solves `self · x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>, MatError> {
        if b.len() != self.rows {
            return Err(MatError::DimensionMismatch);
        }
        let aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| if j < self.cols { self.get(i, j).clone() } else { b[i].clone() });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = alloc::vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }
}

impl<F: OrderedField> Mat<F> {
    /// Sylvester's criterion: all leading principal minors are positive.
    pub fn is_positive_definite(&self) -> Result<bool, MatError> {
        if !self.is_symmetric() {
            return Err(MatError::NotSymmetric);
        }
        for k in 1..=self.rows {
            let idx: Vec<usize> = (0..k).collect();
            if self.submatrix(&idx, &idx).det()?.signum() <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, rat, Rat};

    fn m(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = Mat::<Rat>::identity(3);
        assert_eq!(id.rref(), (id.clone(), alloc::vec![0, 1, 2]));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rref(), (m(&[&[1, 2], &[0, 0]]), alloc::vec![0]));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).rref(), (Mat::identity(2), alloc::vec![0, 1]));
    }

    #[test]
    fn kernel_examples() {
        assert!(Mat::<Rat>::identity(3).kernel_basis().is_empty());
        assert_eq!(Mat::<Rat>::zeros(2, 3).kernel_basis().len(), 3);
        assert_eq!(m(&[&[1, 1, 0]]).kernel_basis(), alloc::vec![alloc::vec![rat(-1), rat(1), rat(0)], alloc::vec![rat(0), rat(0), rat(1)]]);
    }

    #[test]
    fn determinants_and_inverses() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).det().unwrap(), rat(-2));
        assert_eq!(m(&[&[2, 0, 0], &[0, 3, 0], &[1, 1, 1]]).det().unwrap(), rat(6));
        let inv = m(&[&[2, 1], &[1, 1]]).inverse().unwrap().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse().unwrap(), None);
        assert_eq!(m(&[&[1, 2, 3]]).det(), Err(MatError::NotSquare));
    }

    #[test]
    fn sylvester() {
        assert!(Mat::<Rat>::identity(6).is_positive_definite().unwrap());
        assert!(!m(&[&[1, 0], &[0, -1]]).is_positive_definite().unwrap());
        assert!(m(&[&[2, 1], &[1, 2]]).is_positive_definite().unwrap());
        assert_eq!(m(&[&[1, 2], &[0, 1]]).is_positive_definite(), Err(MatError::NotSymmetric));
    }

    #[test]
    fn solving() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(a.solve(&[rat(3), rat(1)]).unwrap(), Some(alloc::vec![rat(2), rat(1)]));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).solve(&[rat(1), rat(2)]).unwrap(), None);
        assert_eq!(a.scale(&frac(1, 2)).trace(), rat(0));
    }
}
