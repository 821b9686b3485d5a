use rayon::prelude::*;

use super::{curvature_space, Tensor4};
use crate::error::{Error, Result};
use crate::exactnum::{sparse_dot, sparse_from_dense, Echelon, Matrix, Rational, SparseVec, Subspace};
use crate::model::Structure;

/// The curvature tensors of a structure together with coordinates on them.
///
/// A curvature tensor is described by its values at the pivot columns of the
/// echelon basis (its coordinates). Subspaces handed out by the `*_coords`
/// methods live in this coordinate space of dimension [`CurvatureSpace::dim`].
#[derive(Clone, Debug)]
pub struct CurvatureSpace {
    structure: Structure,
    space: Subspace<Rational>,
    basis: Vec<Tensor4>,
    gram: Matrix<Rational>,
}

impl CurvatureSpace {
    pub fn new(s: &Structure) -> Self {
        let space = curvature_space(s);
        let dim = s.dim();
        let basis: Vec<Tensor4> = space.sparse_rows().iter().map(|r| Tensor4::from_sparse(dim, r)).collect();
        let inv = s.inverse_form();
        let raised: Vec<SparseVec<Rational>> =
            basis.par_iter().map(|t| t.apply_slots(inv, &[0, 1, 2, 3]).to_sparse()).collect();
        let rows = space.sparse_rows();
        let k = rows.len();
        let upper: Vec<Vec<Rational>> =
            (0..k).into_par_iter().map(|i| (i..k).map(|j| sparse_dot(&rows[i], &raised[j])).collect()).collect();
        let gram = Matrix::from_fn(k, k, |i, j| if i <= j { upper[i][j - i].clone() } else { upper[j][i - j].clone() });
        CurvatureSpace { structure: s.clone(), space, basis, gram }
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The space as a subspace of `⊗^4`.
    pub fn subspace(&self) -> &Subspace<Rational> {
        &self.space
    }

    pub fn basis(&self) -> &[Tensor4] {
        &self.basis
    }

    /// Gram matrix of the tensor inner product in coordinates.
    pub fn gram(&self) -> &Matrix<Rational> {
        &self.gram
    }

    /// Coordinates of `t`, or `None` if it is not a curvature tensor.
    pub fn coords(&self, t: &Tensor4) -> Option<Vec<Rational>> {
        if t.dim() != self.structure.dim() {
            return None;
        }
        self.space.coordinates_sparse(&t.to_sparse())
    }

    pub fn lift(&self, coords: &[Rational]) -> Tensor4 {
        Tensor4::from_sparse(self.structure.dim(), &self.space.combination(coords))
    }

    /// Lifts a coordinate subspace to `⊗^4`.
    pub fn lift_subspace(&self, sub: &Subspace<Rational>) -> Subspace<Rational> {
        let n4 = self.structure.dim().pow(4);
        let rows = self.space.sparse_rows();
        let vecs = sub
            .basis_vectors()
            .iter()
            .map(|c| crate::exactnum::sparse_combination(c, rows, n4))
            .collect();
        Subspace::from_sparse_spanning(n4, vecs)
    }

    /// Coordinate subspace of a subspace of `⊗^4` contained in this space.
    pub fn restrict_subspace(&self, sub: &Subspace<Rational>) -> Result<Subspace<Rational>> {
        let vecs = sub
            .sparse_rows()
            .iter()
            .map(|r| self.space.coordinates_sparse(r).ok_or(Error::NotCurvatureTensor))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_spanning(self.dim(), vecs))
    }

    /// `<x, y>` for coordinate vectors.
    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let gy = self.gram.mul_vec(y).expect("coordinate length");
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    /// Images of the basis under `f`, evaluated in parallel.
    pub fn images<F>(&self, f: F) -> Vec<Vec<Rational>>
    where
        F: Fn(&Tensor4) -> Vec<Rational> + Sync + Send,
    {
        self.basis.par_iter().map(f).collect()
    }

    /// Kernel (in coordinates) of a linear map given by basis images.
    pub fn kernel_of_images(&self, images: &[Vec<Rational>]) -> Subspace<Rational> {
        let k = self.dim();
        assert_eq!(images.len(), k);
        let m = images.first().map_or(0, |v| v.len());
        // Row r of the map matrix collects coordinate r of every image.
        let mut rows: Vec<SparseVec<Rational>> = (0..m)
            .map(|r| {
                images
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v[r].is_zero())
                    .map(|(i, v)| (i, v[r].clone()))
                    .collect::<SparseVec<Rational>>()
            })
            .filter(|r| !r.is_empty())
            .collect();
        rows.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().map(|x| x.0).cmp(b.iter().map(|x| x.0))));
        rows.dedup();
        let mut e = Echelon::new(k);
        for r in &rows {
            if e.rank() == k {
                break;
            }
            e.insert(r);
        }
        Subspace::from_sparse_spanning(k, e.kernel_vectors())
    }

    /// Kernel (in coordinates) of a linear map on curvature tensors.
    pub fn kernel_of<F>(&self, f: F) -> Subspace<Rational>
    where
        F: Fn(&Tensor4) -> Vec<Rational> + Sync + Send,
    {
        self.kernel_of_images(&self.images(f))
    }

    /// Rank of a linear map restricted to a coordinate subspace.
    pub fn rank_on<F>(&self, sub: &Subspace<Rational>, f: F) -> usize
    where
        F: Fn(&Tensor4) -> Vec<Rational> + Sync + Send,
    {
        let vecs: Vec<Vec<Rational>> = sub.basis_vectors().par_iter().map(|c| f(&self.lift(c))).collect();
        let width = vecs.first().map_or(0, |v| v.len());
        let mut e = Echelon::new(width);
        for v in &vecs {
            e.insert(&sparse_from_dense(v));
        }
        e.rank()
    }

    /// Orthogonal complement of a coordinate subspace under the tensor form.
    pub fn orthogonal_complement(&self, sub: &Subspace<Rational>) -> Subspace<Rational> {
        sub.orthogonal_complement_unchecked(&self.gram)
    }

    /// Gram matrix of the form restricted to a coordinate subspace.
    pub fn restricted_gram(&self, sub: &Subspace<Rational>) -> Matrix<Rational> {
        let b = sub.basis_vectors();
        let gb: Vec<Vec<Rational>> = b.par_iter().map(|v| self.gram.mul_vec(v).expect("length")).collect();
        Matrix::from_fn(b.len(), b.len(), |i, j| b[i].iter().zip(&gb[j]).map(|(x, y)| x * y).sum())
    }

    pub fn is_nondegenerate_on(&self, sub: &Subspace<Rational>) -> bool {
        self.restricted_gram(sub).rank() == sub.dim()
    }
}
