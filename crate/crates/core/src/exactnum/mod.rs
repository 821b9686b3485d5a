//! Exact scalars and dense linear algebra over the rationals and the
//! Gaussian rationals.

mod echelon;
mod gauss;
mod matrix;
mod rational;
mod scalar;
mod subspace;

pub use echelon::{
    sparse_combination, sparse_dot, sparse_from_dense, sparse_get, sparse_scale, sparse_sub_scaled,
    sparse_to_dense, Echelon, SparseVec,
};
pub use gauss::GaussRational;
pub use matrix::Matrix;
pub use rational::{ParseRationalError, Rational};
pub use scalar::Scalar;
pub use subspace::{subspace_equal, Subspace};

/// Free-function form of [`Matrix::rank`].
pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    m.rank()
}

/// Free-function form of [`Matrix::kernel`].
pub fn kernel<T: Scalar>(m: &Matrix<T>) -> Subspace<T> {
    m.kernel()
}

/// Free-function form of [`Subspace::orthogonal_complement`].
pub fn orthogonal_complement<T: Scalar>(s: &Subspace<T>, form: &Matrix<T>) -> crate::Result<Subspace<T>> {
    s.orthogonal_complement(form)
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = Matrix<Rational>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |xs| {
                Matrix::from_fn(r, c, |i, j| Rational::from(xs[i * c + j]))
            })
        })
    }

    fn diag_form() -> impl Strategy<Value = Matrix<Rational>> {
        proptest::collection::vec(prop_oneof![Just(-1i64), Just(1), Just(2), Just(-3)], 1..6)
            .prop_map(|d| Matrix::diagonal(&d.into_iter().map(Rational::from).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(m in small_matrix()) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.dim(), m.cols());
            for v in k.basis_vectors() {
                prop_assert!(m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn complement_dimension_and_involution(form in diag_form(), seed in proptest::collection::vec(-2i64..=2, 36)) {
            let n = form.rows();
            let vecs: Vec<Vec<Rational>> = (0..n.min(3))
                .map(|i| (0..n).map(|j| Rational::from(seed[i * n + j])).collect())
                .collect();
            let s = Subspace::from_spanning(n, vecs);
            let c = s.orthogonal_complement(&form).unwrap();
            prop_assert_eq!(s.dim() + c.dim(), n);
            // Nondegenerate restriction <=> trivial intersection; then complement is an involution.
            if s.intersect(&c).unwrap().is_zero() {
                prop_assert_eq!(c.orthogonal_complement(&form).unwrap(), s);
            }
        }

        #[test]
        fn rational_field_laws(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
            prop_assert_eq!(&x * &(&y + &Rational::one()), &(&x * &y) + &x);
        }
    }
}
