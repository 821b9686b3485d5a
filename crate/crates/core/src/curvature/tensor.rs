//! Dense covariant 2- and 4-tensors on a `dim`-dimensional space.

use crate::error::{Error, Result};
use crate::exactnum::{sparse_from_dense, sparse_to_dense, Matrix, Rational, Scalar, SparseVec};

/// Nonzero entries of each column of `m`: `cols[a] = [(a', m[a'][a])]`.
fn column_support<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<(usize, T)>> {
    (0..m.cols())
        .map(|a| (0..m.rows()).filter(|&r| !m.get(r, a).is_zero()).map(|r| (r, m.get(r, a).clone())).collect())
        .collect()
}

/// Applies `m` in one slot of a dense tensor with `rank` slots:
/// `out(.., a, ..) = sum_{a'} m[a'][a] t(.., a', ..)`.
fn apply_in_slot<T: Scalar>(data: &[T], dim: usize, rank: usize, m: &Matrix<T>, slot: usize) -> Vec<T> {
    let support = column_support(m);
    let stride = dim.pow((rank - 1 - slot) as u32);
    (0..data.len())
        .map(|i| {
            let a = (i / stride) % dim;
            let base = i - a * stride;
            support[a]
                .iter()
                .fold(T::zero(), |acc, (src, coef)| {
                    let x = &data[base + src * stride];
                    if x.is_zero() {
                        acc
                    } else {
                        acc.add_ref(&coef.mul_ref(x))
                    }
                })
        })
        .collect()
}

/// Covariant 2-tensor `t(e_a, e_b)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tensor2<T: Scalar = Rational> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor2<T> {
    pub fn zeros(dim: usize) -> Self {
        Tensor2 { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                data.push(f(a, b));
            }
        }
        Tensor2 { dim, data }
    }

    pub fn from_matrix(m: &Matrix<T>) -> Self {
        assert!(m.is_square());
        Tensor2 { dim: m.rows(), data: m.entries().to_vec() }
    }

    pub fn from_vec(dim: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        Ok(Tensor2 { dim, data })
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_fn(self.dim, self.dim, |a, b| self.get(a, b).clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> &T {
        &self.data[a * self.dim + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: T) {
        self.data[a * self.dim + b] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor2<U> {
        Tensor2 { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |a, b| self.get(b, a).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        *self == self.transpose().neg()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        Tensor2 { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        Tensor2 { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg_ref())
    }

    /// `(m^* t)(x, y) = t(m x, m y)`.
    pub fn pullback(&self, m: &Matrix<T>) -> Self {
        let once = apply_in_slot(&self.data, self.dim, 2, m, 0);
        Tensor2 { dim: self.dim, data: apply_in_slot(&once, self.dim, 2, m, 1) }
    }

    /// Applies `m` in one slot (0 or 1).
    pub fn apply_slot(&self, m: &Matrix<T>, slot: usize) -> Self {
        Tensor2 { dim: self.dim, data: apply_in_slot(&self.data, self.dim, 2, m, slot) }
    }

    /// `eps^{ac} eps^{bd} s_{ab} t_{cd}` for an inverse form `eps^{..}`.
    pub fn contract_with(&self, other: &Self, inverse_form: &Matrix<T>) -> T {
        let raised = other.apply_slot(inverse_form, 0).apply_slot(inverse_form, 1);
        self.data.iter().zip(&raised.data).fold(T::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
    }

    /// Trace `eps^{ab} t_{ab}`.
    pub fn trace(&self, inverse_form: &Matrix<T>) -> T {
        let mut acc = T::zero();
        for a in 0..self.dim {
            for b in 0..self.dim {
                let e = inverse_form.get(a, b);
                if !e.is_zero() {
                    acc = acc.add_ref(&e.mul_ref(self.get(a, b)));
                }
            }
        }
        acc
    }
}

/// Covariant 4-tensor `t(e_a, e_b, e_c, e_d)`, stored densely.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tensor4<T: Scalar = Rational> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor4<T> {
    pub fn zeros(dim: usize) -> Self {
        Tensor4 { dim, data: vec![T::zero(); dim.pow(4)] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut([usize; 4]) -> T) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for i in 0..dim.pow(4) {
            data.push(f(Self::unflatten_in(dim, i)));
        }
        Tensor4 { dim, data }
    }

    pub fn from_vec(dim: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != dim.pow(4) {
            return Err(Error::DimensionMismatch { expected: dim.pow(4), found: data.len() });
        }
        Ok(Tensor4 { dim, data })
    }

    pub fn from_sparse(dim: usize, v: &SparseVec<T>) -> Self {
        Tensor4 { dim, data: sparse_to_dense(v, dim.pow(4)) }
    }

    pub fn to_sparse(&self) -> SparseVec<T> {
        sparse_from_dense(&self.data)
    }

    /// `theta(x, y) psi(z, w)`.
    pub fn outer(theta: &Tensor2<T>, psi: &Tensor2<T>) -> Self {
        assert_eq!(theta.dim(), psi.dim());
        Self::from_fn(theta.dim(), |[a, b, c, d]| theta.get(a, b).mul_ref(psi.get(c, d)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flatten(&self, idx: [usize; 4]) -> usize {
        let n = self.dim;
        ((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3]
    }

    fn unflatten_in(n: usize, i: usize) -> [usize; 4] {
        [i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n]
    }

    pub fn unflatten(&self, i: usize) -> [usize; 4] {
        Self::unflatten_in(self.dim, i)
    }

    pub fn get(&self, idx: [usize; 4]) -> &T {
        &self.data[self.flatten(idx)]
    }

    pub fn set(&mut self, idx: [usize; 4], v: T) {
        let i = self.flatten(idx);
        self.data[i] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Nonzero entries as `(index, value)`.
    pub fn nonzero_entries(&self) -> Vec<([usize; 4], T)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (self.unflatten(i), x.clone()))
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor4<U> {
        Tensor4 { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    fn check_dim(&self, o: &Self) -> Result<()> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: o.dim });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_dim(o).expect("tensor dimensions");
        Tensor4 { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_dim(o).expect("tensor dimensions");
        Tensor4 { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg_ref())
    }

    /// Applies `m` in one slot (0..4).
    pub fn apply_slot(&self, m: &Matrix<T>, slot: usize) -> Self {
        Tensor4 { dim: self.dim, data: apply_in_slot(&self.data, self.dim, 4, m, slot) }
    }

    /// Applies `m` in every listed slot.
    pub fn apply_slots(&self, m: &Matrix<T>, slots: &[usize]) -> Self {
        slots.iter().fold(self.clone(), |t, s| t.apply_slot(m, *s))
    }

    /// `(m^* t)(x, y, z, w) = t(mx, my, mz, mw)`.
    pub fn pullback(&self, m: &Matrix<T>) -> Self {
        self.apply_slots(m, &[0, 1, 2, 3])
    }

    /// Tensor with slots rearranged: `out(i_0..i_3) = self(i_{perm[0]}, .., i_{perm[3]})`.
    pub fn permute(&self, perm: [usize; 4]) -> Self {
        Self::from_fn(self.dim, |idx| self.get([idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]]).clone())
    }

    /// Full contraction with all indices of `other` raised by `inverse_form`.
    pub fn contract_with(&self, other: &Self, inverse_form: &Matrix<T>) -> Result<T> {
        self.check_dim(other)?;
        if inverse_form.rows() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: inverse_form.rows() });
        }
        let raised = other.apply_slots(inverse_form, &[0, 1, 2, 3]);
        Ok(self
            .data
            .iter()
            .zip(&raised.data)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(T::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn slot_application_matches_definition() {
        let dim = 3;
        let t = Tensor4::from_fn(dim, |[a, b, c, d]| r((a * 27 + b * 9 + c * 3 + d) as i64 - 20));
        let m = Matrix::from_fn(dim, dim, |i, j| r((i as i64 - j as i64) * 2 + 1));
        for slot in 0..4 {
            let out = t.apply_slot(&m, slot);
            for i in 0..dim.pow(4) {
                let idx = t.unflatten(i);
                let mut want = Rational::zero();
                for k in 0..dim {
                    let mut src = idx;
                    src[slot] = k;
                    want = &want + &(m.get(k, idx[slot]) * t.get(src));
                }
                assert_eq!(out.get(idx), &want);
            }
        }
    }

    #[test]
    fn two_tensor_pullback() {
        let t = Tensor2::from_fn(2, |a, b| r((a * 2 + b) as i64 + 1));
        let swap = Matrix::from_fn(2, 2, |i, j| r((i != j) as i64));
        let p = t.pullback(&swap);
        assert_eq!(p.get(0, 0), t.get(1, 1));
        assert_eq!(p.get(0, 1), t.get(1, 0));
    }
}
