//! The (para-)Gray symmetrizer, the operator `P`, and the subspaces it
//! carves out of the curvature tensors.

use rayon::prelude::*;

use crate::curvature::{is_algebraic_curvature, CurvatureSpace, Tensor2, Tensor4};
use crate::error::{Error, Result};
use crate::exactnum::{Echelon, Matrix, Rational, Scalar, Subspace};
use crate::model::{Kind, Structure};

/// Sign in front of the six mixed terms of the symmetrizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraySign {
    Hermitian,
    ParaHermitian,
}

impl GraySign {
    pub fn for_kind(kind: Kind) -> Self {
        match kind {
            Kind::Hermitian => GraySign::Hermitian,
            Kind::ParaHermitian => GraySign::ParaHermitian,
        }
    }

    pub fn mixed_sign(self) -> i64 {
        match self {
            GraySign::Hermitian => -1,
            GraySign::ParaHermitian => 1,
        }
    }
}

const MIXED: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Symmetrizer with an explicit operator and sign; works over any scalar.
pub fn gray_symmetrize_with<T: Scalar>(t: &Tensor4<T>, j: &Matrix<T>, sign: GraySign) -> Tensor4<T> {
    let mut out = t.add(&t.pullback(j));
    let mut mixed = Tensor4::zeros(t.dim());
    for slots in MIXED {
        mixed = mixed.add(&t.apply_slots(j, &slots));
    }
    if sign.mixed_sign() < 0 {
        out = out.sub(&mixed);
    } else {
        out = out.add(&mixed);
    }
    out
}

/// The Gray symmetrizer for `s` (all plus signs in the para case, minus on
/// the six mixed terms in the Hermitian case).
pub fn gray_symmetrize(t: &Tensor4, s: &Structure) -> Result<Tensor4> {
    if t.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: t.dim() });
    }
    Ok(gray_symmetrize_with(t, s.j(), GraySign::for_kind(s.kind())))
}

pub fn satisfies_gray(a: &Tensor4, s: &Structure) -> bool {
    gray_symmetrize(a, s).map(|g| g.is_zero()).unwrap_or(false)
}

/// `P(theta)(x,y,z,w) = theta(x,z,y,w) + theta(y,w,x,z) - theta(x,w,y,z) - theta(y,z,x,w)`.
pub fn p_operator<T: Scalar>(theta: &Tensor4<T>) -> Tensor4<T> {
    Tensor4::from_fn(theta.dim(), |[x, y, z, w]| {
        theta
            .get([x, z, y, w])
            .add_ref(theta.get([y, w, x, z]))
            .sub_ref(theta.get([x, w, y, z]))
            .sub_ref(theta.get([y, z, x, w]))
    })
}

/// Echelon basis of `{theta : theta^T = sym·theta, J^*theta = eig·theta}`
/// with `sym, eig` in `{1, -1}`.
pub fn two_tensor_basis(s: &Structure, sym: i64, eig: i64) -> Vec<Tensor2> {
    let d = s.dim();
    let half = Rational::new(1, 2);
    let mut e = Echelon::new(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut t = Tensor2::zeros(d);
            t.set(a, b, Rational::one());
            let t = t.add(&t.transpose().scale(&Rational::from(sym))).scale(&half);
            let t = t.add(&t.pullback(s.j()).scale(&Rational::from(eig))).scale(&half);
            e.insert_dense(t.entries());
        }
    }
    Subspace::from_echelon(e)
        .basis_vectors()
        .into_iter()
        .map(|v| Tensor2::from_vec(d, v).expect("length"))
        .collect()
}

/// Basis of `S^2_{eig}`: symmetric tensors with `J^*theta = eig·theta`.
pub fn s2_basis(s: &Structure, eig: i64) -> Vec<Tensor2> {
    two_tensor_basis(s, 1, eig)
}

/// Basis of all symmetric 2-tensors.
pub fn s2_full_basis(dim: usize) -> Vec<Tensor2> {
    let mut out = Vec::new();
    for a in 0..dim {
        for b in a..dim {
            let mut t = Tensor2::zeros(dim);
            t.set(a, b, Rational::one());
            t.set(b, a, Rational::one());
            out.push(t);
        }
    }
    out
}

/// The `S^2_eig` slot defining the realizable subspace: `-1` for para, and
/// `+1` for the Hermitian mirror.
pub fn p_slot_sign(kind: Kind) -> i64 {
    match kind {
        Kind::ParaHermitian => -1,
        Kind::Hermitian => 1,
    }
}

/// Coordinates of `P(S^2_{slot} ⊗ S^2)` inside the curvature space.
pub fn p_image_coords(cs: &CurvatureSpace, slot: i64) -> Result<Subspace<Rational>> {
    let s = cs.structure();
    let left = s2_basis(s, slot);
    let right = s2_full_basis(s.dim());
    let pairs: Vec<(usize, usize)> = (0..left.len()).flat_map(|i| (0..right.len()).map(move |j| (i, j))).collect();
    let coords: Vec<Vec<Rational>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = p_operator(&Tensor4::outer(&left[i], &right[j]));
            if !is_algebraic_curvature(&a) {
                return Err(Error::NotCurvatureTensor);
            }
            cs.coords(&a).ok_or(Error::NotCurvatureTensor)
        })
        .collect::<Result<_>>()?;
    Ok(Subspace::from_spanning(cs.dim(), coords))
}

/// The realizable subspace `P(S^2_- ⊗ S^2)` in `⊗^4`.
pub fn p_image_subspace(s: &Structure) -> Result<Subspace<Rational>> {
    s.require_para()?;
    let cs = CurvatureSpace::new(s);
    Ok(cs.lift_subspace(&p_image_coords(&cs, -1)?))
}

/// Coordinates of the curvature tensors killed by the Gray symmetrizer.
pub fn gray_kernel_coords(cs: &CurvatureSpace) -> Subspace<Rational> {
    let s = cs.structure();
    let sign = GraySign::for_kind(s.kind());
    cs.kernel_of(|t| gray_symmetrize_with(t, s.j(), sign).entries().to_vec())
}

pub fn gray_kernel_subspace(s: &Structure) -> Subspace<Rational> {
    let cs = CurvatureSpace::new(s);
    cs.lift_subspace(&gray_kernel_coords(&cs))
}

/// `A(Jx,y,z,w) - A(x,y,Jz,w)`.
pub fn w7_defect(t: &Tensor4, j: &Matrix<Rational>) -> Tensor4 {
    t.apply_slot(j, 0).sub(&t.apply_slot(j, 2))
}

pub fn w7_coords(cs: &CurvatureSpace) -> Subspace<Rational> {
    let j = cs.structure().j();
    cs.kernel_of(|t| w7_defect(t, j).entries().to_vec())
}

pub fn w7_subspace(s: &Structure) -> Subspace<Rational> {
    let cs = CurvatureSpace::new(s);
    cs.lift_subspace(&w7_coords(&cs))
}

/// Dimensions and subspace relations around the realizable subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainTheoremCheck {
    pub dim: usize,
    pub kind: Kind,
    pub slot: i64,
    pub dim_curvature: usize,
    pub dim_p: usize,
    pub dim_gray_kernel: usize,
    pub dim_w7: usize,
    pub p_in_gray_kernel: bool,
    pub gray_kernel_meets_w7_trivially: bool,
    pub gray_kernel_is_w7_perp: bool,
    pub p_equals_gray_kernel: bool,
}

impl MainTheoremCheck {
    pub fn passed(&self) -> bool {
        self.p_in_gray_kernel
            && self.gray_kernel_meets_w7_trivially
            && self.gray_kernel_is_w7_perp
            && self.p_equals_gray_kernel
    }
}

/// Computes `P`, the Gray kernel and `W7` and compares them.
pub fn check_main_theorem(cs: &CurvatureSpace, slot: i64) -> Result<MainTheoremCheck> {
    let s = cs.structure();
    let p = p_image_coords(cs, slot)?;
    let g = gray_kernel_coords(cs);
    let w7 = w7_coords(cs);
    let w7_perp = cs.orthogonal_complement(&w7);
    Ok(MainTheoremCheck {
        dim: s.dim(),
        kind: s.kind(),
        slot,
        dim_curvature: cs.dim(),
        dim_p: p.dim(),
        dim_gray_kernel: g.dim(),
        dim_w7: w7.dim(),
        p_in_gray_kernel: p.is_subspace_of(&g)?,
        gray_kernel_meets_w7_trivially: g.intersect(&w7)?.is_zero(),
        gray_kernel_is_w7_perp: g.equals(&w7_perp)?,
        p_equals_gray_kernel: p.equals(&g)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::tensor_inner_product;
    use crate::model::{standard_hermitian, standard_para_hermitian};

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn p_of_product_matches_expansion() {
        let phi = Tensor2::from_fn(4, |a, b| r(((a + 1) * (b + 1)) as i64 % 5 - 2));
        let psi = Tensor2::from_fn(4, |a, b| r((a + b) as i64 - 3 + (a * b) as i64));
        assert!(phi.is_symmetric() && psi.is_symmetric());
        let p = p_operator(&Tensor4::outer(&phi, &psi));
        let expected = Tensor4::from_fn(4, |[x, y, z, w]| {
            phi.get(x, z) * psi.get(y, w) + phi.get(y, w) * psi.get(x, z)
                - phi.get(x, w) * psi.get(y, z)
                - phi.get(y, z) * psi.get(x, w)
        });
        assert_eq!(p, expected);
        assert!(is_algebraic_curvature(&p));
        assert!(p_operator(&Tensor4::<Rational>::zeros(4)).is_zero());
    }

    #[test]
    fn s2_eigenspace_dims() {
        let s = standard_para_hermitian(2).unwrap();
        let minus = s2_basis(&s, -1);
        let plus = s2_basis(&s, 1);
        assert_eq!(minus.len() + plus.len(), 10);
        assert!(minus.iter().all(|t| t.is_symmetric() && t.pullback(s.j()) == t.neg()));
        assert!(plus.iter().all(|t| t.is_symmetric() && &t.pullback(s.j()) == t));
        assert_eq!(minus.len(), 4);
    }

    #[test]
    fn w7_elements_are_scaled_by_eight() {
        let s = standard_para_hermitian(2).unwrap();
        let cs = CurvatureSpace::new(&s);
        let w7 = w7_coords(&cs);
        assert!(w7.dim() > 0);
        for c in w7.basis_vectors() {
            let a = cs.lift(&c);
            assert_eq!(gray_symmetrize(&a, &s).unwrap(), a.scale(&r(8)));
            assert!(!satisfies_gray(&a, &s));
            assert_eq!(a.apply_slot(s.j(), 0), a.apply_slot(s.j(), 1));
        }
    }

    #[test]
    fn main_theorem_dim4() {
        let s = standard_para_hermitian(2).unwrap();
        let cs = CurvatureSpace::new(&s);
        let c = check_main_theorem(&cs, -1).unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.dim_p + c.dim_w7, 20);
    }

    #[test]
    fn hermitian_mirror_slot() {
        let s = standard_hermitian(0, 2).unwrap();
        let cs = CurvatureSpace::new(&s);
        let plus = check_main_theorem(&cs, 1).unwrap();
        assert!(plus.passed(), "{plus:?}");
        let minus = check_main_theorem(&cs, -1).unwrap();
        assert!(!minus.p_in_gray_kernel);
    }

    #[test]
    fn p_image_requires_para() {
        let s = standard_hermitian(0, 1).unwrap();
        assert_eq!(p_image_subspace(&s), Err(Error::NotParaHermitian));
    }

    #[test]
    fn gray_output_keeps_curvature_symmetries() {
        let s = standard_para_hermitian(2).unwrap();
        let cs = CurvatureSpace::new(&s);
        let c: Vec<Rational> = (0..cs.dim()).map(|i| r(i as i64 % 7 - 3)).collect();
        let a = cs.lift(&c);
        let g = gray_symmetrize(&a, &s).unwrap();
        assert!(is_algebraic_curvature(&g));
        assert!(tensor_inner_product(&g, &Tensor4::zeros(4), &s).unwrap().is_zero());
    }
}
