use std::fmt;

use super::echelon::{sparse_from_dense, Echelon};
use super::{Scalar, Subspace};
use crate::error::{Error, Result};

/// Dense row-major matrix with exact entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add_ref(&a.mul_ref(b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect())
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        self.zip_with(rhs, |a, b| a.add_ref(b))
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        self.zip_with(rhs, |a, b| a.sub_ref(b))
    }

    fn zip_with(&self, rhs: &Matrix<T>, f: impl Fn(&T, &T) -> T) -> Result<Matrix<T>> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|x| x.mul_ref(s))
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(|x| x.neg_ref())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(&sparse_from_dense(self.row(i)));
        }
        e.rank()
    }

    /// `{ v : self · v = 0 }`.
    pub fn kernel(&self) -> Subspace<T> {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(&sparse_from_dense(self.row(i)));
        }
        Subspace::from_sparse_spanning(self.cols, e.kernel_vectors())
    }

    /// Row space as a subspace of `T^cols`.
    pub fn row_space(&self) -> Subspace<T> {
        Subspace::from_spanning(self.cols, (0..self.rows).map(|i| self.row(i).to_vec()).collect())
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(T::zero());
            };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = det.neg_ref();
            }
            let piv = a[col * n + col].clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv().expect("non-zero pivot");
            for r in col + 1..n {
                let f = a[r * n + col].mul_ref(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[r * n + j].sub_ref(&f.mul_ref(&a[col * n + j]));
                    a[r * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<T>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let w = 2 * n;
        let mut a = vec![T::zero(); n * w];
        for i in 0..n {
            for j in 0..n {
                a[i * w + j] = self.get(i, j).clone();
            }
            a[i * w + n + i] = T::one();
        }
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r * w + col].is_zero())?;
            if p != col {
                for j in 0..w {
                    a.swap(p * w + j, col * w + j);
                }
            }
            let inv = a[col * w + col].inv()?;
            for j in 0..w {
                a[col * w + j] = a[col * w + j].mul_ref(&inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * w + col].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..w {
                    let v = a[r * w + j].sub_ref(&f.mul_ref(&a[col * w + j]));
                    a[r * w + j] = v;
                }
            }
        }
        Some(Matrix::from_fn(n, n, |i, j| a[i * w + n + j].clone()))
    }

    /// One solution of `self · x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[T]) -> Result<Option<Vec<T>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let mut e = Echelon::new(self.cols + 1);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.push(b[i].clone());
            e.insert(&sparse_from_dense(&row));
        }
        let (pivots, rows) = e.into_sorted();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![T::zero(); self.cols];
        for (p, row) in pivots.iter().zip(&rows) {
            if let Some((_, v)) = row.iter().find(|(c, _)| *c == self.cols) {
                x[*p] = v.clone();
            }
        }
        Ok(Some(x))
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
