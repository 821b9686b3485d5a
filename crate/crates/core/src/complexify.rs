//! Carrying the positive definite Hermitian model to the para-Hermitian one
//! through the complexification: `ẽ_i = i·e_i`, `f̃_i = -f_i`, `J̃ = i·J`.
//!
//! A real tensor on the source becomes, after the complex change of basis, a
//! tensor whose entries are real or purely imaginary according to the parity
//! of the number of `e`-slots. Parity-homogeneous tensors are returned as the
//! real tensor with the common phase `1` or `i` divided out.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{is_algebraic_curvature, CurvatureSpace, Tensor2, Tensor4};
use crate::error::{Error, Result};
use crate::exactnum::{GaussRational, Matrix, Rational, Subspace};
use crate::gray::{gray_kernel_subspace, two_tensor_basis};
use crate::model::{signature, standard_hermitian, standard_para_hermitian, Kind, Structure};
use crate::tvdecomp::ricci;

/// Phase divided out of a transferred tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Phase {
    One,
    I,
}

#[derive(Clone, Debug)]
pub struct TransferMap {
    source: Structure,
    target: Structure,
    /// Columns are the target basis vectors in source coordinates.
    change_of_basis: Matrix<GaussRational>,
}

fn gauss(m: &Matrix<Rational>) -> Matrix<GaussRational> {
    m.map(|x| GaussRational::real(x.clone()))
}

impl TransferMap {
    pub fn source(&self) -> &Structure {
        &self.source
    }

    pub fn target(&self) -> &Structure {
        &self.target
    }

    pub fn change_of_basis(&self) -> &Matrix<GaussRational> {
        &self.change_of_basis
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    /// `Cᵀ F C` for the complex-bilinear extension `F` of the source form.
    pub fn target_form_complex(&self) -> Matrix<GaussRational> {
        let c = &self.change_of_basis;
        c.transpose().mul(&gauss(self.source.form())).and_then(|x| x.mul(c)).expect("square")
    }

    /// `C⁻¹ (i J) C`.
    pub fn target_j_complex(&self) -> Matrix<GaussRational> {
        let c = &self.change_of_basis;
        let ij = gauss(self.source.j()).map(|x| x.mul_i_pow(1));
        let inv = c.inverse().expect("change of basis is invertible");
        inv.mul(&ij).and_then(|x| x.mul(c)).expect("square")
    }
}

/// Builds the transfer for the standard positive definite Hermitian model.
pub fn transfer_structure(s: &Structure) -> Result<TransferMap> {
    let n = s.n();
    if s.kind() != Kind::Hermitian || n == 0 {
        return Err(Error::NonStandardBasis);
    }
    let std = standard_hermitian(0, n)?;
    if s.form() != std.form() || s.j() != std.j() {
        return Err(Error::NonStandardBasis);
    }
    let d = 2 * n;
    let change_of_basis = Matrix::from_fn(d, d, |r, c| {
        if r != c {
            GaussRational::zero()
        } else if r < n {
            GaussRational::i()
        } else {
            GaussRational::real(-Rational::one())
        }
    });
    let map = TransferMap { source: s.clone(), target: standard_para_hermitian(n)?, change_of_basis };
    debug_assert_eq!(map.target_form_complex(), gauss(map.target.form()));
    debug_assert_eq!(map.target_j_complex(), gauss(map.target.j()));
    Ok(map)
}

/// Exact checks on a transfer map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureCheck {
    pub n: usize,
    pub form_matches_target: bool,
    pub j_matches_target: bool,
    pub j_squares_to_identity: bool,
    /// `J̃ᵀ F̃ J̃ = -F̃`.
    pub j_anti_isometry: bool,
    pub signature: Option<(usize, usize)>,
    pub target_valid: bool,
}

impl StructureCheck {
    pub fn passed(&self) -> bool {
        self.form_matches_target
            && self.j_matches_target
            && self.j_squares_to_identity
            && self.j_anti_isometry
            && self.signature == Some((self.n, self.n))
            && self.target_valid
    }
}

pub fn check_structure(map: &TransferMap) -> StructureCheck {
    let f = map.target_form_complex();
    let j = map.target_j_complex();
    let d = 2 * map.n();
    let jj = j.mul(&j).expect("square");
    let jfj = j.transpose().mul(&f).and_then(|x| x.mul(&j)).expect("square");
    StructureCheck {
        n: map.n(),
        form_matches_target: f == gauss(map.target.form()),
        j_matches_target: j == gauss(map.target.j()),
        j_squares_to_identity: jj == Matrix::identity(d),
        j_anti_isometry: jfj == f.map(|x| -x),
        signature: signature(map.target.form()),
        target_valid: map.target.is_valid(),
    }
}

/// Divides out a common phase `1` or `i`; fails if the entries are neither
/// all real nor all imaginary. The index reported is the first entry that
/// breaks the pattern.
pub fn phase_real_form(entries: &[GaussRational]) -> Result<(Vec<Rational>, Phase)> {
    if entries.iter().all(GaussRational::is_real) {
        return Ok((entries.iter().map(|z| z.re.clone()).collect(), Phase::One));
    }
    if entries.iter().all(|z| z.re.is_zero()) {
        return Ok((entries.iter().map(|z| z.im.clone()).collect(), Phase::I));
    }
    let first_imag = entries.iter().position(|z| !z.is_real()).unwrap();
    let bad = entries
        .iter()
        .position(|z| !z.re.is_zero() && !z.im.is_zero())
        .unwrap_or_else(|| entries.iter().position(|z| !z.re.is_zero()).unwrap().max(first_imag));
    Err(Error::ImaginaryResidue(vec![bad]))
}

pub fn transfer_two_tensor_complex(theta: &Tensor2, map: &TransferMap) -> Result<Tensor2<GaussRational>> {
    if theta.dim() != map.source.dim() {
        return Err(Error::DimensionMismatch { expected: map.source.dim(), found: theta.dim() });
    }
    Ok(theta.map(|x| GaussRational::real(x.clone())).pullback(&map.change_of_basis))
}

pub fn transfer_two_tensor_phased(theta: &Tensor2, map: &TransferMap) -> Result<(Tensor2, Phase)> {
    let c = transfer_two_tensor_complex(theta, map)?;
    let d = theta.dim();
    let (vals, phase) = phase_real_form(c.entries()).map_err(|e| match e {
        Error::ImaginaryResidue(i) => Error::ImaginaryResidue(vec![i[0] / d, i[0] % d]),
        e => e,
    })?;
    Ok((Tensor2::from_vec(d, vals)?, phase))
}

/// The real form of `θ` on the target; see the module notes for the phase.
pub fn transfer_two_tensor(theta: &Tensor2, map: &TransferMap) -> Result<Tensor2> {
    Ok(transfer_two_tensor_phased(theta, map)?.0)
}

pub fn transfer_curvature_complex(a: &Tensor4, map: &TransferMap) -> Result<Tensor4<GaussRational>> {
    if a.dim() != map.source.dim() {
        return Err(Error::DimensionMismatch { expected: map.source.dim(), found: a.dim() });
    }
    if !is_algebraic_curvature(a) {
        return Err(Error::NotCurvatureTensor);
    }
    Ok(a.map(|x| GaussRational::real(x.clone())).pullback(&map.change_of_basis))
}

pub fn transfer_curvature_phased(a: &Tensor4, map: &TransferMap) -> Result<(Tensor4, Phase)> {
    let c = transfer_curvature_complex(a, map)?;
    let (vals, phase) = phase_real_form(c.entries()).map_err(|e| match e {
        Error::ImaginaryResidue(i) => Error::ImaginaryResidue(c.unflatten(i[0]).to_vec()),
        e => e,
    })?;
    Ok((Tensor4::from_vec(a.dim(), vals)?, phase))
}

pub fn transfer_curvature(a: &Tensor4, map: &TransferMap) -> Result<Tensor4> {
    Ok(transfer_curvature_phased(a, map)?.0)
}

/// Splits a 4-tensor by the parity of the number of `e`-slots (indices `< n`).
pub fn parity_split(a: &Tensor4, n: usize) -> (Tensor4, Tensor4) {
    let mut even = Tensor4::zeros(a.dim());
    let mut odd = Tensor4::zeros(a.dim());
    for (idx, v) in a.nonzero_entries() {
        if idx.iter().filter(|&&i| i < n).count() % 2 == 0 {
            even.set(idx, v);
        } else {
            odd.set(idx, v);
        }
    }
    (even, odd)
}

/// `(symmetric, J^*-eigenvalue)` of a 2-tensor, if it has both.
pub fn two_tensor_label(t: &Tensor2, s: &Structure) -> Option<(bool, i64)> {
    let sym = if t.is_symmetric() {
        true
    } else if t.is_antisymmetric() {
        false
    } else {
        return None;
    };
    let jt = t.pullback(s.j());
    if jt == *t {
        Some((sym, 1))
    } else if jt == t.neg() {
        Some((sym, -1))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapRecord {
    /// `"S2_+"`, `"S2_-"`, `"L2_+"` or `"L2_-"` on the source.
    pub source_label: String,
    pub target_label: String,
    pub dim: usize,
    /// Rank of the transferred basis.
    pub image_rank: usize,
    pub target_dim: usize,
    pub passed: bool,
}

fn label(sym: bool, eig: i64) -> String {
    format!("{}2_{}", if sym { "S" } else { "L" }, if eig > 0 { "+" } else { "-" })
}

/// Transfers full bases of the four eigenspaces and checks that each lands
/// on the opposite eigenspace with full rank.
pub fn check_two_tensor_swaps(map: &TransferMap) -> Result<Vec<SwapRecord>> {
    let mut out = Vec::new();
    let d = map.source.dim();
    for sym in [true, false] {
        for eig in [1, -1] {
            let basis = two_tensor_basis(&map.source, if sym { 1 } else { -1 }, eig);
            let target_basis = two_tensor_basis(&map.target, if sym { 1 } else { -1 }, -eig);
            let mut ok = true;
            let mut images = Vec::new();
            for b in &basis {
                let t = transfer_two_tensor(b, map)?;
                ok &= two_tensor_label(&t, &map.target) == Some((sym, -eig));
                images.push(t.entries().to_vec());
            }
            let rank = Subspace::from_spanning(d * d, images).dim();
            out.push(SwapRecord {
                source_label: label(sym, eig),
                target_label: label(sym, -eig),
                dim: basis.len(),
                image_rank: rank,
                target_dim: target_basis.len(),
                passed: ok && rank == basis.len() && rank == target_basis.len(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvatureTransferCheck {
    pub n: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Rank of the transferred curvature basis.
    pub image_rank: usize,
    pub images_are_curvature: bool,
    pub source_gray_dim: usize,
    pub target_gray_dim: usize,
    /// The transferred Gray kernel equals the para-Gray kernel.
    pub gray_kernel_maps_onto: bool,
}

impl CurvatureTransferCheck {
    pub fn passed(&self) -> bool {
        self.source_dim == self.target_dim
            && self.image_rank == self.source_dim
            && self.images_are_curvature
            && self.source_gray_dim == self.target_gray_dim
            && self.gray_kernel_maps_onto
    }
}

fn transferred_span(vectors: &[Tensor4], map: &TransferMap) -> Result<(Subspace<Rational>, bool)> {
    let d4 = map.source.dim().pow(4);
    let images: Vec<Tensor4> = vectors.par_iter().map(|t| transfer_curvature(t, map)).collect::<Result<_>>()?;
    let all_curv = images.iter().all(is_algebraic_curvature);
    Ok((Subspace::from_sparse_spanning(d4, images.iter().map(Tensor4::to_sparse).collect()), all_curv))
}

/// Rank of the transfer on `𝔄` and the Gray-kernel correspondence.
pub fn check_curvature_transfer(map: &TransferMap) -> Result<CurvatureTransferCheck> {
    let d = map.source.dim();
    let src = CurvatureSpace::new(&map.source);
    let tgt = CurvatureSpace::new(&map.target);
    let (image, images_are_curvature) = transferred_span(src.basis(), map)?;
    let src_gray = gray_kernel_subspace(&map.source);
    let tgt_gray = gray_kernel_subspace(&map.target);
    let gray_vectors: Vec<Tensor4> = src_gray.sparse_rows().iter().map(|r| Tensor4::from_sparse(d, r)).collect();
    let (gray_image, _) = transferred_span(&gray_vectors, map)?;
    Ok(CurvatureTransferCheck {
        n: map.n(),
        source_dim: src.dim(),
        target_dim: tgt.dim(),
        image_rank: image.dim(),
        images_are_curvature,
        source_gray_dim: src_gray.dim(),
        target_gray_dim: tgt_gray.dim(),
        gray_kernel_maps_onto: gray_image.equals(&tgt_gray)?,
    })
}

/// `(τ, τ⋆)` of the source tensor and of the transfer of its even part
/// (the odd part has both traces zero on each side).
pub fn scalar_invariants(a: &Tensor4, map: &TransferMap) -> Result<[(Rational, Rational); 2]> {
    let (even, odd) = parity_split(a, map.n());
    let r = ricci(a, &map.source)?;
    let t = ricci(&transfer_curvature(&even, map)?, &map.target)?;
    let o = ricci(&transfer_curvature(&odd, map)?, &map.target)?;
    debug_assert!(o.tau.is_zero() && o.tau_star.is_zero());
    let _ = o;
    Ok([(r.tau, r.tau_star), (t.tau, t.tau_star)])
}
