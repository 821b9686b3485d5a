//! Ricci contractions, the splitting of 2-tensors under the unitary group,
//! and the curvature modules `W1..W10` as explicit subspaces.

use rayon::prelude::*;

use crate::curvature::{CurvatureSpace, Tensor2, Tensor4};
use crate::error::{Error, Result};
use crate::exactnum::{Rational, Subspace};
use crate::gray::{gray_kernel_coords, two_tensor_basis, w7_defect};
use crate::model::{kaehler_form, Kind, Structure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciData {
    pub rho: Tensor2,
    pub rho_star: Tensor2,
    pub tau: Rational,
    pub tau_star: Rational,
}

/// `rho(x,y) = eps^{ij} A(e_i,x,y,e_j)` and `rho*(x,y) = ±eps^{ij} A(e_i,x,Jy,Je_j)`,
/// with the minus sign in the para case.
pub fn ricci(a: &Tensor4, s: &Structure) -> Result<RicciData> {
    if a.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: a.dim() });
    }
    let inv = s.inverse_form();
    let rho = contract_outer(a, inv);
    let mut rho_star = contract_outer(&a.apply_slots(s.j(), &[2, 3]), inv);
    if s.kind() == Kind::ParaHermitian {
        rho_star = rho_star.neg();
    }
    let tau = rho.trace(inv);
    let tau_star = rho_star.trace(inv);
    Ok(RicciData { rho, rho_star, tau, tau_star })
}

/// `eps^{ij} t(e_i, x, y, e_j)`.
fn contract_outer(t: &Tensor4, inv: &crate::exactnum::Matrix<Rational>) -> Tensor2 {
    let d = t.dim();
    let mut out = Tensor2::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let e = inv.get(i, j);
            if e.is_zero() {
                continue;
            }
            for x in 0..d {
                for y in 0..d {
                    let v = t.get([i, x, y, j]);
                    if !v.is_zero() {
                        let cur = out.get(x, y) + &(e * v);
                        out.set(x, y, cur);
                    }
                }
            }
        }
    }
    out
}

/// The six orthogonal pieces of a 2-tensor.
///
/// "same" refers to the `J^*`-eigenvalue of the form (`+1` Hermitian, `-1`
/// para) and "opposite" to the other one; trace-free parts are orthogonal to
/// the form or to the Kähler form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTensorDecomposition {
    pub kind: Kind,
    pub scalar_coeff: Rational,
    pub scalar_part: Tensor2,
    pub omega_coeff: Rational,
    pub omega_part: Tensor2,
    pub sym_same_0: Tensor2,
    pub sym_opposite: Tensor2,
    pub skew_same_0: Tensor2,
    pub skew_opposite: Tensor2,
}

impl TwoTensorDecomposition {
    /// Components in a fixed order with their conventional names.
    pub fn named(&self) -> Vec<(&'static str, &Tensor2)> {
        let (s0, s, l0, l) = match self.kind {
            Kind::ParaHermitian => ("S2_0,-", "S2_+", "L2_0,-", "L2_+"),
            Kind::Hermitian => ("S2_0,+", "S2_-", "L2_0,+", "L2_-"),
        };
        vec![
            ("scalar", &self.scalar_part),
            (s0, &self.sym_same_0),
            (s, &self.sym_opposite),
            ("omega", &self.omega_part),
            (l0, &self.skew_same_0),
            (l, &self.skew_opposite),
        ]
    }

    pub fn sum(&self) -> Tensor2 {
        let parts = self.named();
        parts[1..].iter().fold(parts[0].1.clone(), |acc, (_, t)| acc.add(t))
    }
}

/// `<theta, psi> = eps^{ac} eps^{bd} theta_ab psi_cd`.
pub fn two_tensor_inner(a: &Tensor2, b: &Tensor2, s: &Structure) -> Rational {
    a.contract_with(b, s.inverse_form())
}

pub fn decompose_two_tensor(t: &Tensor2, s: &Structure) -> TwoTensorDecomposition {
    let half = Rational::new(1, 2);
    let lam = Rational::from(s.kind().form_sign());
    let j = s.j();
    let sym = t.add(&t.transpose()).scale(&half);
    let skew = t.sub(&t.transpose()).scale(&half);
    let split = |x: &Tensor2| {
        let jx = x.pullback(j).scale(&lam);
        (x.add(&jx).scale(&half), x.sub(&jx).scale(&half))
    };
    let (sym_same, sym_opposite) = split(&sym);
    let (skew_same, skew_opposite) = split(&skew);
    let g = s.form_tensor();
    let om = kaehler_form(s);
    let coeff = |x: &Tensor2, base: &Tensor2| {
        &two_tensor_inner(x, base, s) / &two_tensor_inner(base, base, s)
    };
    let scalar_coeff = coeff(&sym_same, &g);
    let omega_coeff = coeff(&skew_same, &om);
    let scalar_part = g.scale(&scalar_coeff);
    let omega_part = om.scale(&omega_coeff);
    TwoTensorDecomposition {
        kind: s.kind(),
        sym_same_0: sym_same.sub(&scalar_part),
        skew_same_0: skew_same.sub(&omega_part),
        scalar_coeff,
        scalar_part,
        omega_coeff,
        omega_part,
        sym_opposite,
        skew_opposite,
    }
}

/// A module or isotypic block of the curvature decomposition.
#[derive(Clone, Debug)]
pub struct ModuleEntry {
    pub label: &'static str,
    /// Irreducible modules making up the block.
    pub members: Vec<&'static str>,
    /// Basis in curvature-space coordinates.
    pub coords: Subspace<Rational>,
}

impl ModuleEntry {
    pub fn dim(&self) -> usize {
        self.coords.dim()
    }
}

/// Rank of a characterizing map on a block versus its target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCheck {
    pub label: &'static str,
    pub map: &'static str,
    pub rank: usize,
    pub block_dim: usize,
    pub target_dim: usize,
}

impl IsoCheck {
    pub fn bijective(&self) -> bool {
        self.rank == self.block_dim && self.rank == self.target_dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableValidation {
    pub pairwise_orthogonal: bool,
    pub dims_sum_to_total: bool,
    /// Labels whose restricted form is degenerate.
    pub degenerate: Vec<&'static str>,
    /// Labels not equal to the complement of the sum of the others.
    pub not_complement: Vec<&'static str>,
    pub iso: Vec<IsoCheck>,
    pub gray_kernel_is_sum_without_w7: bool,
}

impl TableValidation {
    pub fn passed(&self) -> bool {
        self.pairwise_orthogonal
            && self.dims_sum_to_total
            && self.degenerate.is_empty()
            && self.not_complement.is_empty()
            && self.iso.iter().all(IsoCheck::bijective)
            && self.gray_kernel_is_sum_without_w7
    }
}

#[derive(Clone, Debug)]
pub struct ModuleTable {
    space: CurvatureSpace,
    entries: Vec<ModuleEntry>,
    validation: TableValidation,
}

/// Which linear functional of the Ricci data a block is read off from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RicciMap {
    Scalars,
    RhoSame0,
    RhoSame0AndStar,
    RhoOppositeSym,
    RhoStarOppositeSkew,
}

impl RicciMap {
    fn name(self, kind: Kind) -> &'static str {
        match (self, kind) {
            (RicciMap::Scalars, _) => "tau+tau*",
            (RicciMap::RhoSame0, Kind::ParaHermitian) => "rho_0,-,S",
            (RicciMap::RhoSame0, Kind::Hermitian) => "rho_0,+,S",
            (RicciMap::RhoSame0AndStar, Kind::ParaHermitian) => "rho_0,-,S+rho*_0,-,S",
            (RicciMap::RhoSame0AndStar, Kind::Hermitian) => "rho_0,+,S+rho*_0,+,S",
            (RicciMap::RhoOppositeSym, Kind::ParaHermitian) => "rho_+,S",
            (RicciMap::RhoOppositeSym, Kind::Hermitian) => "rho_-,S",
            (RicciMap::RhoStarOppositeSkew, Kind::ParaHermitian) => "rho*_+,L",
            (RicciMap::RhoStarOppositeSkew, Kind::Hermitian) => "rho*_-,L",
        }
    }

    fn eval(self, a: &Tensor4, s: &Structure) -> Vec<Rational> {
        let r = ricci(a, s).expect("dimension");
        match self {
            RicciMap::Scalars => vec![r.tau, r.tau_star],
            RicciMap::RhoSame0 => decompose_two_tensor(&r.rho, s).sym_same_0.entries().to_vec(),
            RicciMap::RhoSame0AndStar => {
                let mut v = decompose_two_tensor(&r.rho, s).sym_same_0.entries().to_vec();
                v.extend_from_slice(decompose_two_tensor(&r.rho_star, s).sym_same_0.entries());
                v
            }
            RicciMap::RhoOppositeSym => decompose_two_tensor(&r.rho, s).sym_opposite.entries().to_vec(),
            RicciMap::RhoStarOppositeSkew => decompose_two_tensor(&r.rho_star, s).skew_opposite.entries().to_vec(),
        }
    }

    fn target_dim(self, s: &Structure) -> usize {
        let lam = s.kind().form_sign();
        let s0 = two_tensor_basis(s, 1, lam).len() - 1;
        match self {
            RicciMap::Scalars => 2,
            RicciMap::RhoSame0 => s0,
            RicciMap::RhoSame0AndStar => 2 * s0,
            RicciMap::RhoOppositeSym => two_tensor_basis(s, 1, -lam).len(),
            RicciMap::RhoStarOppositeSkew => two_tensor_basis(s, -1, -lam).len(),
        }
    }
}

/// Builds the decomposition of the curvature tensors for `2n` in `{4, 6, 8}`.
pub fn module_table(s: &Structure) -> Result<ModuleTable> {
    ModuleTable::build(CurvatureSpace::new(s))
}

impl ModuleTable {
    pub fn build(cs: CurvatureSpace) -> Result<Self> {
        let s = cs.structure().clone();
        let dim = s.dim();
        if ![4, 6, 8].contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let lam = Rational::from(s.kind().form_sign());
        let j = s.j().clone();
        let flat = |t: Tensor4| t.entries().to_vec();
        let ker_rho = cs.kernel_of(|a| ricci(a, &s).expect("dimension").rho.entries().to_vec());
        let ker_rho_star = cs.kernel_of(|a| ricci(a, &s).expect("dimension").rho_star.entries().to_vec());
        let ker_both = ker_rho.intersect(&ker_rho_star)?;
        let jj_fixed = cs.kernel_of(|a| flat(a.sub(&a.apply_slots(&j, &[0, 1]).scale(&lam))));
        let w3 = jj_fixed.intersect(&ker_rho)?;
        let w7 = cs.kernel_of(|a| flat(w7_defect(a, &j)));
        let w7_perp = cs.orthogonal_complement(&w7);

        let complement_of_kernel = |m: RicciMap| cs.orthogonal_complement(&cs.kernel_of(|a| m.eval(a, &s)));
        let mut entries = vec![ModuleEntry {
            label: "W1+W4",
            members: vec!["W1", "W4"],
            coords: complement_of_kernel(RicciMap::Scalars),
        }];
        let block25 = if dim == 4 { RicciMap::RhoSame0 } else { RicciMap::RhoSame0AndStar };
        entries.push(ModuleEntry {
            label: if dim == 4 { "W2" } else { "W2+W5" },
            members: if dim == 4 { vec!["W2"] } else { vec!["W2", "W5"] },
            coords: complement_of_kernel(block25),
        });
        entries.push(ModuleEntry { label: "W3", members: vec!["W3"], coords: w3.clone() });
        if dim >= 8 {
            let pullback_fixed = cs.kernel_of(|a| flat(a.sub(&a.pullback(&j))));
            // The three conditions alone also admit W7; cut it out.
            let w6 = ker_both
                .intersect(&pullback_fixed)?
                .intersect(&cs.orthogonal_complement(&w3))?
                .intersect(&w7_perp)?;
            entries.push(ModuleEntry { label: "W6", members: vec!["W6"], coords: w6 });
        }
        entries.push(ModuleEntry { label: "W7", members: vec!["W7"], coords: w7 });
        entries.push(ModuleEntry {
            label: "W8",
            members: vec!["W8"],
            coords: complement_of_kernel(RicciMap::RhoOppositeSym),
        });
        entries.push(ModuleEntry {
            label: "W9",
            members: vec!["W9"],
            coords: complement_of_kernel(RicciMap::RhoStarOppositeSkew),
        });
        if dim >= 6 {
            let pullback_anti = cs.kernel_of(|a| flat(a.add(&a.pullback(&j))));
            entries.push(ModuleEntry { label: "W10", members: vec!["W10"], coords: pullback_anti.intersect(&ker_both)? });
        }
        let iso_maps = [
            ("W1+W4", RicciMap::Scalars),
            (entries[1].label, block25),
            ("W8", RicciMap::RhoOppositeSym),
            ("W9", RicciMap::RhoStarOppositeSkew),
        ];
        let iso = iso_maps
            .iter()
            .map(|(label, m)| {
                let e = entries.iter().find(|e| e.label == *label).expect("entry");
                IsoCheck {
                    label,
                    map: m.name(s.kind()),
                    rank: cs.rank_on(&e.coords, |a| m.eval(a, &s)),
                    block_dim: e.dim(),
                    target_dim: m.target_dim(&s),
                }
            })
            .collect();
        let validation = validate(&cs, &entries, iso)?;
        Ok(ModuleTable { space: cs, entries, validation })
    }

    pub fn space(&self) -> &CurvatureSpace {
        &self.space
    }

    pub fn entries(&self) -> &[ModuleEntry] {
        &self.entries
    }

    pub fn validation(&self) -> &TableValidation {
        &self.validation
    }

    /// Number of irreducible modules, counting each isotypic block by its members.
    pub fn module_count(&self) -> usize {
        self.entries.iter().map(|e| e.members.len()).sum()
    }

    pub fn labels(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.label).collect()
    }

    /// Looks up an entry; `"W1⊕W4"` is accepted for `"W1+W4"`.
    pub fn entry(&self, label: &str) -> Result<&ModuleEntry> {
        let norm: String = label.replace('⊕', "+").replace(' ', "");
        let norm = norm.trim_start_matches('~');
        self.entries
            .iter()
            .find(|e| e.label.eq_ignore_ascii_case(norm))
            .ok_or_else(|| Error::LabelAbsent(label.to_string()))
    }

    /// Subspace of the labeled block in `⊗^4`.
    pub fn subspace(&self, label: &str) -> Result<Subspace<Rational>> {
        Ok(self.space.lift_subspace(&self.entry(label)?.coords))
    }

    /// Coordinates (in the block basis) of the orthogonal projection of `a`.
    fn projection_coeffs(&self, a_coords: &[Rational], e: &ModuleEntry) -> Result<Vec<Rational>> {
        let gram = self.space.restricted_gram(&e.coords);
        let rhs: Vec<Rational> = e.coords.basis_vectors().iter().map(|b| self.space.inner(b, a_coords)).collect();
        gram.solve(&rhs)?
            .filter(|_| gram.rank() == e.dim())
            .ok_or_else(|| Error::DegenerateRestriction(e.label.to_string()))
    }

    /// The component of `a` in the labeled block.
    pub fn component_in(&self, a: &Tensor4, label: &str) -> Result<Tensor4> {
        let e = self.entry(label)?;
        let c = self.space.coords(a).ok_or(Error::NotCurvatureTensor)?;
        let x = self.projection_coeffs(&c, e)?;
        let coords = crate::exactnum::sparse_to_dense(&e.coords.combination(&x), self.space.dim());
        Ok(self.space.lift(&coords))
    }

    /// All components, in table order.
    pub fn components(&self, a: &Tensor4) -> Result<Vec<(&'static str, Tensor4)>> {
        self.entries.iter().map(|e| Ok((e.label, self.component_in(a, e.label)?))).collect()
    }
}

/// Free-function form of [`ModuleTable::component_in`].
pub fn component_in(a: &Tensor4, label: &str, table: &ModuleTable) -> Result<Tensor4> {
    table.component_in(a, label)
}

fn validate(cs: &CurvatureSpace, entries: &[ModuleEntry], iso: Vec<IsoCheck>) -> Result<TableValidation> {
    let total: usize = entries.iter().map(ModuleEntry::dim).sum();
    let bases: Vec<Vec<Vec<Rational>>> = entries.iter().map(|e| e.coords.basis_vectors()).collect();
    let gram = cs.gram();
    let images: Vec<Vec<Vec<Rational>>> = bases
        .par_iter()
        .map(|b| b.iter().map(|v| gram.mul_vec(v).expect("length")).collect())
        .collect();
    let dot = |x: &[Rational], y: &[Rational]| -> Rational { x.iter().zip(y).map(|(a, b)| a * b).sum() };
    let pairs: Vec<(usize, usize)> =
        (0..entries.len()).flat_map(|i| (i + 1..entries.len()).map(move |k| (i, k))).collect();
    let pairwise_orthogonal = pairs
        .par_iter()
        .all(|&(i, k)| bases[i].iter().all(|x| images[k].iter().all(|y| dot(x, y).is_zero())));
    let degenerate = entries.iter().filter(|e| !cs.is_nondegenerate_on(&e.coords)).map(|e| e.label).collect();
    let mut not_complement = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let mut others = Subspace::zero(cs.dim());
        for (k, o) in entries.iter().enumerate() {
            if k != i {
                others = others.sum(&o.coords)?;
            }
        }
        if !cs.orthogonal_complement(&others).equals(&e.coords)? {
            not_complement.push(e.label);
        }
    }
    let mut without_w7 = Subspace::zero(cs.dim());
    for e in entries.iter().filter(|e| e.label != "W7") {
        without_w7 = without_w7.sum(&e.coords)?;
    }
    let gray_kernel_is_sum_without_w7 = gray_kernel_coords(cs).equals(&without_w7)?;
    Ok(TableValidation {
        pairwise_orthogonal,
        dims_sum_to_total: total == cs.dim(),
        degenerate,
        not_complement,
        iso,
        gray_kernel_is_sum_without_w7,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{standard_hermitian, standard_para_hermitian};

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn decomposition_of_form_and_kaehler_form() {
        for s in [standard_para_hermitian(2).unwrap(), standard_hermitian(0, 2).unwrap()] {
            let g = s.form_tensor();
            let d = decompose_two_tensor(&g, &s);
            assert_eq!(d.scalar_part, g);
            assert!(d.named().iter().skip(1).all(|(_, t)| t.is_zero()));
            let om = kaehler_form(&s);
            let d = decompose_two_tensor(&om, &s);
            assert_eq!(d.omega_part, om);
            assert_eq!(d.omega_coeff, Rational::one());
            assert!(d.named().iter().filter(|(n, _)| *n != "omega").all(|(_, t)| t.is_zero()));
            assert_eq!(two_tensor_inner(&g, &g, &s), r(4));
            assert_eq!(two_tensor_inner(&om, &om, &s).abs(), r(4));
        }
    }

    #[test]
    fn decomposition_reassembles() {
        let s = standard_para_hermitian(2).unwrap();
        let t = Tensor2::from_fn(4, |a, b| Rational::new((3 * a + 5 * b) as i64 % 7 - 3, 1 + a as i64));
        let d = decompose_two_tensor(&t, &s);
        assert_eq!(d.sum(), t);
        let parts = d.named();
        for i in 0..parts.len() {
            for k in i + 1..parts.len() {
                assert!(two_tensor_inner(parts[i].1, parts[k].1, &s).is_zero(), "{} {}", parts[i].0, parts[k].0);
            }
        }
    }

    #[test]
    fn ricci_of_zero() {
        let s = standard_para_hermitian(2).unwrap();
        let r = ricci(&Tensor4::zeros(4), &s).unwrap();
        assert!(r.rho.is_zero() && r.rho_star.is_zero() && r.tau.is_zero() && r.tau_star.is_zero());
        assert!(ricci(&Tensor4::zeros(2), &s).is_err());
    }

    #[test]
    fn table_dim4_para() {
        let s = standard_para_hermitian(2).unwrap();
        let t = module_table(&s).unwrap();
        assert_eq!(t.module_count(), 7);
        assert!(t.validation().passed(), "{:?}", t.validation());
        let total: usize = t.entries().iter().map(|e| e.dim()).sum();
        assert_eq!(total, 20);
    }

    #[test]
    fn table_dim4_hermitian() {
        let s = standard_hermitian(0, 2).unwrap();
        let t = module_table(&s).unwrap();
        assert_eq!(t.module_count(), 7);
        assert!(t.validation().passed(), "{:?}", t.validation());
    }

    #[test]
    fn unsupported_dimension() {
        let s = standard_para_hermitian(1).unwrap();
        assert!(matches!(module_table(&s), Err(Error::UnsupportedDimension(2))));
    }

    #[test]
    fn components_sum_and_labels() {
        let s = standard_para_hermitian(2).unwrap();
        let t = module_table(&s).unwrap();
        let cs = t.space();
        let c: Vec<Rational> = (0..cs.dim()).map(|i| r(i as i64 % 5 - 2)).collect();
        let a = cs.lift(&c);
        let sum = t.components(&a).unwrap().into_iter().fold(Tensor4::zeros(4), |acc, (_, x)| acc.add(&x));
        assert_eq!(sum, a);
        assert!(matches!(t.component_in(&a, "W10"), Err(Error::LabelAbsent(_))));
        assert!(t.component_in(&a, "W1⊕W4").is_ok());
        let w7 = cs.lift(&t.entry("W7").unwrap().coords.basis_vectors()[0]);
        assert_eq!(t.component_in(&w7, "W7").unwrap(), w7);
        assert!(t.component_in(&w7, "W3").unwrap().is_zero());
    }
}
