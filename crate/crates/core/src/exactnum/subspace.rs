use super::echelon::{
    sparse_combination, sparse_from_dense, sparse_get, sparse_sub_scaled, sparse_to_dense, Echelon, SparseVec,
};
use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// A linear subspace of `T^ambient_dim`, stored as its reduced row-echelon
/// basis. Two subspaces are equal exactly when their stored bases are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<T: Scalar> {
    ambient_dim: usize,
    pivots: Vec<usize>,
    rows: Vec<SparseVec<T>>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, pivots: Vec::new(), rows: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            pivots: (0..ambient_dim).collect(),
            rows: (0..ambient_dim).map(|i| vec![(i, T::one())]).collect(),
        }
    }

    pub fn from_spanning(ambient_dim: usize, vectors: Vec<Vec<T>>) -> Self {
        Self::from_sparse_spanning(ambient_dim, vectors.iter().map(|v| sparse_from_dense(v)).collect())
    }

    pub fn from_sparse_spanning(ambient_dim: usize, vectors: Vec<SparseVec<T>>) -> Self {
        let mut e = Echelon::new(ambient_dim);
        for v in &vectors {
            e.insert(v);
        }
        Self::from_echelon(e)
    }

    pub(crate) fn from_echelon(e: Echelon<T>) -> Self {
        let ambient_dim = e.ncols();
        let (pivots, rows) = e.into_sorted();
        Subspace { ambient_dim, pivots, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn sparse_rows(&self) -> &[SparseVec<T>] {
        &self.rows
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.rows.iter().map(|r| sparse_to_dense(r, self.ambient_dim)).collect()
    }

    /// The echelon basis as a `dim × ambient_dim` matrix.
    pub fn basis(&self) -> Matrix<T> {
        if self.rows.is_empty() {
            return Matrix::zeros(0, self.ambient_dim);
        }
        Matrix::from_rows(self.basis_vectors())
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: n });
        }
        Ok(())
    }

    fn residual(&self, v: &SparseVec<T>) -> SparseVec<T> {
        let mut r = v.clone();
        for (p, row) in self.pivots.iter().zip(&self.rows) {
            if let Some(x) = sparse_get(v, *p).cloned() {
                r = sparse_sub_scaled(&r, &x, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[T]) -> Result<bool> {
        self.check_len(v.len())?;
        Ok(self.contains_sparse(&sparse_from_dense(v)))
    }

    pub fn contains_sparse(&self, v: &SparseVec<T>) -> bool {
        self.residual(v).is_empty()
    }

    /// Coordinates of `v` in the echelon basis; `None` if `v` is outside.
    ///
    /// Each basis row is the identity on the pivot columns, so the
    /// coordinates are just the entries of `v` there.
    pub fn coordinates_sparse(&self, v: &SparseVec<T>) -> Option<Vec<T>> {
        if !self.contains_sparse(v) {
            return None;
        }
        Some(self.pivots.iter().map(|p| sparse_get(v, *p).cloned().unwrap_or_else(T::zero)).collect())
    }

    pub fn coordinates(&self, v: &[T]) -> Result<Option<Vec<T>>> {
        self.check_len(v.len())?;
        Ok(self.coordinates_sparse(&sparse_from_dense(v)))
    }

    /// Coordinates read off the pivot columns without a membership check.
    pub fn coordinates_unchecked(&self, v: &SparseVec<T>) -> Vec<T> {
        self.pivots.iter().map(|p| sparse_get(v, *p).cloned().unwrap_or_else(T::zero)).collect()
    }

    pub fn combination(&self, coords: &[T]) -> SparseVec<T> {
        sparse_combination(coords, &self.rows, self.ambient_dim)
    }

    pub fn equals(&self, other: &Subspace<T>) -> Result<bool> {
        self.check_len(other.ambient_dim)?;
        Ok(self == other)
    }

    pub fn is_subspace_of(&self, other: &Subspace<T>) -> Result<bool> {
        self.check_len(other.ambient_dim)?;
        Ok(self.rows.iter().all(|r| other.contains_sparse(r)))
    }

    pub fn sum(&self, other: &Subspace<T>) -> Result<Subspace<T>> {
        self.check_len(other.ambient_dim)?;
        let mut e = Echelon::new(self.ambient_dim);
        for r in self.rows.iter().chain(&other.rows) {
            e.insert(r);
        }
        Ok(Self::from_echelon(e))
    }

    pub fn intersect(&self, other: &Subspace<T>) -> Result<Subspace<T>> {
        self.check_len(other.ambient_dim)?;
        let n = self.ambient_dim;
        // Rows (b_j | 0) and (a_i | e_i); echelon rows whose ambient part
        // vanishes carry coefficient vectors x with x·A in B.
        let mut e = Echelon::new(n + self.dim());
        for r in &other.rows {
            e.insert(r);
        }
        for (i, r) in self.rows.iter().enumerate() {
            let mut v = r.clone();
            v.push((n + i, T::one()));
            e.insert(&v);
        }
        let (pivots, rows) = e.into_sorted();
        let mut out = Echelon::new(n);
        for (p, row) in pivots.iter().zip(&rows) {
            if *p < n {
                continue;
            }
            let mut coeffs = vec![T::zero(); self.dim()];
            for (c, x) in row {
                coeffs[c - n] = x.clone();
            }
            out.insert(&self.combination(&coeffs));
        }
        Ok(Self::from_echelon(out))
    }

    /// Image under a linear map given by its matrix (`map · v`).
    pub fn image(&self, map: &Matrix<T>) -> Result<Subspace<T>> {
        self.check_len(map.cols())?;
        let vecs = self
            .basis_vectors()
            .iter()
            .map(|v| map.mul_vec(v).map(|w| sparse_from_dense(&w)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_sparse_spanning(map.rows(), vecs))
    }

    /// `{ v : form(v, w) = 0 for all w in self }`.
    ///
    /// Fails with [`Error::SingularForm`] if `form` is degenerate. The result
    /// always has dimension `ambient_dim - dim`, but it need not be a
    /// complement of `self` when the form is indefinite.
    pub fn orthogonal_complement(&self, form: &Matrix<T>) -> Result<Subspace<T>> {
        if !form.is_square() {
            return Err(Error::DimensionMismatch { expected: form.rows(), found: form.cols() });
        }
        self.check_len(form.rows())?;
        if form.det()?.is_zero() {
            return Err(Error::SingularForm);
        }
        Ok(self.orthogonal_complement_unchecked(form))
    }

    /// As [`Self::orthogonal_complement`], for a form already known to be
    /// nondegenerate.
    pub(crate) fn orthogonal_complement_unchecked(&self, form: &Matrix<T>) -> Subspace<T> {
        let n = self.ambient_dim;
        let mut e = Echelon::new(n);
        let ft = form.transpose();
        for r in &self.rows {
            // row · form
            let dense = sparse_to_dense(r, n);
            let w = ft.mul_vec(&dense).expect("square form");
            e.insert(&sparse_from_dense(&w));
        }
        Subspace::from_sparse_spanning(n, e.kernel_vectors())
    }
}

/// Free-function form of [`Subspace::equals`].
pub fn subspace_equal<T: Scalar>(a: &Subspace<T>, b: &Subspace<T>) -> Result<bool> {
    a.equals(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|x| Rational::from(*x)).collect()
    }

    #[test]
    fn equality_examples() {
        let a = Subspace::from_spanning(2, vec![v(&[1, 0])]);
        let b = Subspace::from_spanning(2, vec![v(&[2, 0])]);
        let c = Subspace::from_spanning(2, vec![v(&[0, 1])]);
        assert!(a.equals(&a).unwrap());
        assert!(a.equals(&b).unwrap());
        assert!(!a.equals(&c).unwrap());
        assert_eq!(a.equals(&Subspace::zero(3)), Err(Error::DimensionMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn complement_examples() {
        let form = Matrix::diagonal(&v(&[-1, 1]));
        assert_eq!(Subspace::full(2).orthogonal_complement(&form).unwrap().dim(), 0);
        assert_eq!(Subspace::<Rational>::zero(2).orthogonal_complement(&form).unwrap(), Subspace::full(2));
        let e1 = Subspace::from_spanning(2, vec![v(&[1, 0])]);
        let e2 = Subspace::from_spanning(2, vec![v(&[0, 1])]);
        assert_eq!(e1.orthogonal_complement(&form).unwrap(), e2);
        let degenerate = Matrix::diagonal(&v(&[0, 1]));
        assert_eq!(e1.orthogonal_complement(&degenerate), Err(Error::SingularForm));
    }

    #[test]
    fn null_line_is_its_own_complement() {
        let form = Matrix::diagonal(&v(&[-1, 1]));
        let null = Subspace::from_spanning(2, vec![v(&[1, 1])]);
        assert_eq!(null.orthogonal_complement(&form).unwrap(), null);
    }

    #[test]
    fn intersect_and_sum() {
        let a = Subspace::from_spanning(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::from_spanning(3, vec![v(&[0, 1, 1]), v(&[1, 1, 0])]);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, Subspace::from_spanning(3, vec![v(&[1, 1, 0])]));
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(3));
        assert_eq!(a.intersect(&Subspace::zero(3)).unwrap().dim(), 0);
    }

    #[test]
    fn coordinates_round_trip() {
        let a = Subspace::from_spanning(3, vec![v(&[1, 2, 3]), v(&[0, 1, 1])]);
        let x = v(&[2, 7, 9]);
        let c = a.coordinates(&x).unwrap().unwrap();
        assert_eq!(sparse_to_dense(&a.combination(&c), 3), x);
        assert_eq!(a.coordinates(&v(&[0, 0, 1])).unwrap(), None);
    }
}
