//! Hand-built para-Hermitian metrics with known curvature at the origin.

use std::fmt;

use super::{d_kaehler_at, p_realizing_metric, parse_coord, riemann_at, Poly, PolyMetric};
use crate::curvature::{Tensor2, Tensor4};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::gray::{gray_symmetrize, p_operator, s2_basis, s2_full_basis};
use crate::model::{standard_para_hermitian, Structure};
use crate::tvdecomp::{decompose_two_tensor, module_table, ricci, ModuleTable, RicciData};

/// Which piece of `ρ` or `ρ⋆` a table refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RicciPart {
    Full,
    Sym,
    Skew,
    /// Symmetric, `J^*`-eigenvalue `+1`.
    PlusSym,
    /// Symmetric, trace-free, `J^*`-eigenvalue `-1`.
    ZeroMinusSym,
    PlusSkew,
    ZeroMinusSkew,
}

impl RicciPart {
    fn suffix(self) -> &'static str {
        match self {
            RicciPart::Full => "",
            RicciPart::Sym => "_S",
            RicciPart::Skew => "_L",
            RicciPart::PlusSym => "_+,S",
            RicciPart::ZeroMinusSym => "_0,-,S",
            RicciPart::PlusSkew => "_+,L",
            RicciPart::ZeroMinusSkew => "_0,-,L",
        }
    }
}

/// A tensor-valued quantity computed from the curvature at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Curvature,
    /// `A^*(x,y,z,w) = A(x,y,Jz,Jw)`.
    CurvatureStar,
    Rho(RicciPart),
    RhoStar(RicciPart),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Curvature => write!(f, "A"),
            Quantity::CurvatureStar => write!(f, "A*"),
            Quantity::Rho(p) => write!(f, "rho{}", p.suffix()),
            Quantity::RhoStar(p) => write!(f, "rho*{}", p.suffix()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleRelation {
    /// The curvature lies in the module.
    Member,
    NotMember,
    NonzeroComponent,
}

/// One expected fact about an example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    /// Listed entries, with coordinate names such as `x1`, `y2`. For `A` with
    /// `complete`, the table is expanded under the pair symmetries and must
    /// equal the whole tensor; for 2-tensors with `complete`, every entry
    /// that is unlisted together with its transpose must vanish.
    Entries { quantity: Quantity, entries: Vec<(Vec<&'static str>, Rational)>, complete: bool },
    Tau(Rational),
    TauStar(Rational),
    Zero(Quantity),
    Nonzero(Quantity),
    Equal(Quantity, Quantity),
    /// `A(Jx,Jy,z,w) = -A(x,y,z,w)`, asserted to hold or to fail.
    FirstPairJAnti(bool),
    /// `J^*A = -A`.
    JStarAnti,
    Module(ModuleRelation, &'static str),
    /// Curvature at the origin equals `𝒫(Θ)`.
    EqualsP(Tensor4),
    DKaehlerZero,
    GrayZero,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub aliases: Vec<&'static str>,
    /// Which inclusion of the realizable space the example serves.
    pub assertion: &'static str,
    pub structure: Structure,
    pub params: Vec<(&'static str, Rational)>,
    pub metric: PolyMetric,
    pub expected: Vec<Expected>,
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn matches(&self, label: &str) -> bool {
        self.label.eq_ignore_ascii_case(label) || self.aliases.iter().any(|a| a.eq_ignore_ascii_case(label))
    }

    /// True if evaluating needs the module table.
    pub fn needs_table(&self) -> bool {
        self.expected.iter().any(|e| matches!(e, Expected::Module(..)))
    }
}

/// Result of one expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// Offending index tuple or value on failure.
    pub witness: Option<String>,
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

struct Builder {
    n: usize,
    metric: PolyMetric,
}

impl Builder {
    fn new(n: usize) -> Self {
        let s = standard_para_hermitian(n).expect("n >= 1");
        Builder { n, metric: PolyMetric::constant(s.form()) }
    }

    fn var(&self, name: &str) -> Poly {
        Poly::var(2 * self.n, parse_coord(self.n, name).expect("coordinate name"))
    }

    /// Adds `coeff · (±du_a ∘ du_b)` for each signed pair.
    fn add(&mut self, coeff: &Poly, pairs: &[(i64, &str, &str)]) {
        for &(sign, a, b) in pairs {
            let (a, b) = (parse_coord(self.n, a).unwrap(), parse_coord(self.n, b).unwrap());
            self.metric.add_sym_product(a, b, &coeff.scale(&q(sign)));
        }
    }
}

fn sq(p: &Poly) -> Poly {
    p.mul(p)
}

fn entries(list: &[(&[&'static str], Rational)]) -> Vec<(Vec<&'static str>, Rational)> {
    list.iter().map(|(k, v)| (k.to_vec(), v.clone())).collect()
}

/// `Ξ - ε x1² (dx1∘dx1 - dy1∘dy1) - ϱ x1² (dx2∘dx2 - dy2∘dy2)`.
pub fn metric_one(eps: &Rational, rho: &Rational) -> PolyMetric {
    let mut b = Builder::new(2);
    let x1sq = sq(&b.var("x1"));
    b.add(&x1sq.scale(&-eps), &[(1, "x1", "x1"), (-1, "y1", "y1")]);
    b.add(&x1sq.scale(&-rho), &[(1, "x2", "x2"), (-1, "y2", "y2")]);
    b.metric
}

/// `Ξ - 4ε x1² (-dx1∘dx2 + dy1∘dy2)`.
pub fn metric_two(eps: &Rational) -> PolyMetric {
    let mut b = Builder::new(2);
    let c = sq(&b.var("x1")).scale(&(eps * &q(-4)));
    b.add(&c, &[(-1, "x1", "x2"), (1, "y1", "y2")]);
    b.metric
}

/// `Ξ - 2ϱ x1² (-dx1∘dx2 + dy1∘dy2) - 2ε x1² (-dx2∘dx3 + dy2∘dy3)` on 2n = 6.
pub fn metric_three(rho: &Rational, eps: &Rational) -> PolyMetric {
    let mut b = Builder::new(3);
    let x1sq = sq(&b.var("x1"));
    b.add(&x1sq.scale(&(rho * &q(-2))), &[(-1, "x1", "x2"), (1, "y1", "y2")]);
    b.add(&x1sq.scale(&(eps * &q(-2))), &[(-1, "x2", "x3"), (1, "y2", "y3")]);
    b.metric
}

fn metric_w3() -> PolyMetric {
    let mut b = Builder::new(2);
    let c = sq(&b.var("x1")).sub(&sq(&b.var("y1"))).sub(&sq(&b.var("x2"))).add(&sq(&b.var("y2")));
    b.add(&c.scale(&q(-2)), &[(-1, "x1", "x2"), (1, "y1", "y2")]);
    b.metric
}

fn metric_w10() -> PolyMetric {
    let mut b = Builder::new(3);
    let c = sq(&b.var("x1")).add(&sq(&b.var("y1")));
    b.add(&c.scale(&q(-2)), &[(-1, "x2", "x3"), (1, "y2", "y3")]);
    b.metric
}

fn metric_w6() -> PolyMetric {
    let mut b = Builder::new(4);
    let c = b.var("x1").mul(&b.var("x2")).add(&b.var("y1").mul(&b.var("y2")));
    b.add(&c.scale(&q(-4)), &[(-1, "x3", "x4"), (1, "y3", "y4")]);
    b.metric
}

/// Same shape as [`metric_w6`] with `x1x2 - y1y2`; its curvature does have
/// a `W6` component.
fn metric_w6_corrected() -> PolyMetric {
    let mut b = Builder::new(4);
    let c = b.var("x1").mul(&b.var("x2")).sub(&b.var("y1").mul(&b.var("y2")));
    b.add(&c.scale(&q(-4)), &[(-1, "x3", "x4"), (1, "y3", "y4")]);
    b.metric
}

/// A fixed element of `S²₋ ⊗ S²` on 2n = 4.
pub fn generic_theta() -> Tensor4 {
    let s = standard_para_hermitian(2).unwrap();
    let left = s2_basis(&s, -1);
    let right = s2_full_basis(4);
    let mut t = Tensor4::zeros(4);
    for (i, a) in left.iter().enumerate() {
        for (k, b) in right.iter().enumerate() {
            let c = q(((5 * i + 3 * k) % 7) as i64 - 3);
            t = t.add(&Tensor4::outer(a, b).scale(&c));
        }
    }
    t
}

/// Metric-one expectations for given `ε`, `ϱ`.
fn metric_one_tables(eps: &Rational, rho: &Rational) -> Vec<Expected> {
    let two = q(2);
    vec![
        Expected::Entries {
            quantity: Quantity::Curvature,
            entries: entries(&[
                (&["x1", "y1", "y1", "x1"], -eps),
                (&["x1", "x2", "x2", "x1"], rho.clone()),
                (&["x1", "y2", "y2", "x1"], -rho),
            ]),
            complete: true,
        },
        Expected::Tau(&(eps * &two) + &(rho * &q(4))),
        Expected::TauStar(eps * &two),
        Expected::Entries {
            quantity: Quantity::Rho(RicciPart::Full),
            entries: entries(&[
                (&["x1", "x1"], &(-eps) - &(rho * &two)),
                (&["y1", "y1"], eps.clone()),
                (&["x2", "x2"], -rho),
                (&["y2", "y2"], rho.clone()),
            ]),
            complete: true,
        },
    ]
}

/// Catalog entry by label with its parameters overridden. Labels without
/// parameters ignore them.
pub fn catalog_entry_with(label: &str, eps: &Rational, rho: &Rational) -> Result<CatalogEntry> {
    let base = catalog_entry(label)?;
    let s4 = standard_para_hermitian(2)?;
    let s6 = standard_para_hermitian(3)?;
    let params = vec![("epsilon", eps.clone()), ("varrho", rho.clone())];
    let e = match base.label {
        "L5.2-1" => CatalogEntry {
            params,
            metric: metric_one(eps, rho),
            expected: {
                let mut v = metric_one_tables(eps, rho);
                v.push(Expected::Module(ModuleRelation::NonzeroComponent, "W1+W4"));
                v
            },
            ..base
        },
        "L5.2-2" | "L5.2-3" => {
            let mut e = catalog_entry(base.label)?;
            e.params = params;
            e.metric = metric_one(eps, rho);
            e.expected = metric_one_tables(eps, rho);
            e
        }
        "L5.2-4" => CatalogEntry {
            params: vec![("epsilon", eps.clone())],
            metric: metric_two(eps),
            expected: metric_two_tables(eps),
            structure: s4,
            ..base
        },
        "L5.2-5" => CatalogEntry {
            params,
            metric: metric_three(rho, eps),
            expected: metric_three_tables(rho, eps),
            structure: s6,
            ..base
        },
        _ => base,
    };
    Ok(e)
}

fn metric_two_tables(eps: &Rational) -> Vec<Expected> {
    let two_e = eps * &q(2);
    vec![
        Expected::Entries {
            quantity: Quantity::Curvature,
            entries: entries(&[(&["x1", "y1", "y2", "x1"], two_e.clone())]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::CurvatureStar,
            entries: entries(&[(&["x1", "y1", "x2", "y1"], two_e.clone()), (&["y2", "x1", "y1", "x1"], two_e.clone())]),
            complete: false,
        },
        Expected::Entries {
            quantity: Quantity::RhoStar(RicciPart::Full),
            entries: entries(&[(&["x1", "x2"], two_e.clone()), (&["y2", "y1"], -&two_e)]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::RhoStar(RicciPart::Skew),
            entries: entries(&[
                (&["x1", "x2"], eps.clone()),
                (&["x2", "x1"], -eps),
                (&["y2", "y1"], -eps),
                (&["y1", "y2"], eps.clone()),
            ]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::RhoStar(RicciPart::Sym),
            entries: entries(&[
                (&["x1", "x2"], eps.clone()),
                (&["x2", "x1"], eps.clone()),
                (&["y1", "y2"], -eps),
                (&["y2", "y1"], -eps),
            ]),
            complete: true,
        },
        Expected::Equal(Quantity::RhoStar(RicciPart::PlusSkew), Quantity::RhoStar(RicciPart::Skew)),
        Expected::Nonzero(Quantity::RhoStar(RicciPart::PlusSkew)),
    ]
}

fn metric_three_tables(rho: &Rational, eps: &Rational) -> Vec<Expected> {
    let half = Rational::new(1, 2);
    let hr = rho * &half;
    let mut v = vec![
        Expected::Entries {
            quantity: Quantity::Curvature,
            entries: entries(&[
                (&["x1", "y1", "y2", "x1"], rho.clone()),
                (&["x1", "x2", "x3", "x1"], -eps),
                (&["x1", "y2", "y3", "x1"], eps.clone()),
            ]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::Rho(RicciPart::Full),
            entries: entries(&[
                (&["y1", "y2"], -rho),
                (&["x1", "x2"], Rational::zero()),
                (&["x2", "x3"], eps.clone()),
                (&["y2", "y3"], -eps),
            ]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::Rho(RicciPart::ZeroMinusSym),
            entries: entries(&[
                (&["x1", "x2"], hr.clone()),
                (&["y1", "y2"], -&hr),
                (&["x2", "x3"], eps.clone()),
                (&["y2", "y3"], -eps),
            ]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::Rho(RicciPart::PlusSym),
            entries: entries(&[
                (&["x1", "x2"], -&hr),
                (&["y1", "y2"], -&hr),
                (&["x2", "x3"], Rational::zero()),
                (&["y2", "y3"], Rational::zero()),
            ]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::CurvatureStar,
            entries: entries(&[
                (&["x1", "y1", "x2", "y1"], rho.clone()),
                (&["y2", "x1", "y1", "x1"], rho.clone()),
                (&["x1", "x2", "y3", "y1"], -eps),
                (&["x3", "x1", "y1", "y2"], -eps),
                (&["x1", "y2", "x3", "y1"], eps.clone()),
                (&["y3", "x1", "y1", "x2"], eps.clone()),
            ]),
            complete: false,
        },
        Expected::Entries {
            quantity: Quantity::RhoStar(RicciPart::Full),
            entries: entries(&[(&["x1", "x2"], rho.clone()), (&["y2", "y1"], -rho)]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::RhoStar(RicciPart::ZeroMinusSym),
            entries: entries(&[(&["x1", "x2"], hr.clone()), (&["y1", "y2"], -&hr)]),
            complete: true,
        },
        Expected::Entries {
            quantity: Quantity::RhoStar(RicciPart::PlusSkew),
            entries: entries(&[(&["x1", "x2"], hr.clone()), (&["y1", "y2"], hr.clone())]),
            complete: true,
        },
    ];
    if !eps.is_zero() {
        v.push(Expected::Nonzero(Quantity::Rho(RicciPart::ZeroMinusSym)));
    }
    if rho.is_zero() {
        v.push(Expected::Zero(Quantity::RhoStar(RicciPart::ZeroMinusSym)));
    } else {
        v.push(Expected::Nonzero(Quantity::RhoStar(RicciPart::ZeroMinusSym)));
    }
    if !(eps.is_zero() && rho.is_zero()) {
        v.push(Expected::Module(ModuleRelation::NonzeroComponent, "W2+W5"));
    }
    v
}

/// All examples with their default parameters.
pub fn catalog() -> Vec<CatalogEntry> {
    let s4 = standard_para_hermitian(2).unwrap();
    let s6 = standard_para_hermitian(3).unwrap();
    let s8 = standard_para_hermitian(4).unwrap();
    let (one, two, m_one) = (q(1), q(2), q(-1));
    let theta = generic_theta();

    let mut e1 = metric_one_tables(&one, &one);
    e1.push(Expected::Module(ModuleRelation::NonzeroComponent, "W1+W4"));

    let mut e2 = metric_one_tables(&two, &m_one);
    e2.push(Expected::Tau(Rational::zero()));
    e2.push(Expected::Entries {
        quantity: Quantity::Rho(RicciPart::ZeroMinusSym),
        entries: entries(&[
            (&["x1", "x1"], q(-1)),
            (&["y1", "y1"], q(1)),
            (&["x2", "x2"], q(1)),
            (&["y2", "y2"], q(-1)),
        ]),
        complete: true,
    });
    e2.push(Expected::Module(ModuleRelation::NonzeroComponent, "W2"));

    let mut e3 = metric_one_tables(&two, &m_one);
    e3.push(Expected::Entries {
        quantity: Quantity::Rho(RicciPart::PlusSym),
        entries: entries(&[
            (&["x1", "x1"], q(1)),
            (&["y1", "y1"], q(1)),
            (&["x2", "x2"], q(0)),
            (&["y2", "y2"], q(0)),
        ]),
        complete: true,
    });
    e3.push(Expected::Module(ModuleRelation::NonzeroComponent, "W8"));

    let mut e4 = metric_two_tables(&one);
    e4.push(Expected::Module(ModuleRelation::NonzeroComponent, "W9"));

    let e5 = metric_three_tables(&one, &one);

    let e6 = vec![
        Expected::Entries {
            quantity: Quantity::Curvature,
            entries: entries(&[
                (&["x1", "y1", "y2", "x1"], q(1)),
                (&["y1", "x1", "x2", "y1"], q(1)),
                (&["x2", "y1", "y2", "x2"], q(-1)),
                (&["y2", "x1", "x2", "y2"], q(-1)),
            ]),
            complete: true,
        },
        Expected::Zero(Quantity::Rho(RicciPart::Full)),
        Expected::FirstPairJAnti(true),
        Expected::Module(ModuleRelation::Member, "W3"),
    ];

    let e7 = vec![
        Expected::Entries {
            quantity: Quantity::Curvature,
            entries: entries(&[
                (&["x1", "x2", "x3", "x1"], q(-1)),
                (&["x1", "y2", "y3", "x1"], q(1)),
                (&["y1", "x2", "x3", "y1"], q(-1)),
                (&["y1", "y2", "y3", "y1"], q(1)),
            ]),
            complete: true,
        },
        Expected::Zero(Quantity::Rho(RicciPart::Full)),
        Expected::Zero(Quantity::RhoStar(RicciPart::Full)),
        Expected::JStarAnti,
        Expected::Module(ModuleRelation::Member, "W10"),
    ];

    let e8 = vec![
        Expected::Entries {
            quantity: Quantity::Curvature,
            entries: entries(&[
                (&["x1", "x3", "x4", "x2"], q(-1)),
                (&["y1", "x3", "x4", "y2"], q(-1)),
                (&["x1", "x4", "x3", "x2"], q(-1)),
                (&["y1", "x4", "x3", "y2"], q(-1)),
                (&["x1", "y3", "y4", "x2"], q(1)),
                (&["y1", "y3", "y4", "y2"], q(1)),
                (&["x1", "y4", "y3", "x2"], q(1)),
                (&["y1", "y4", "y3", "y2"], q(1)),
            ]),
            complete: true,
        },
        Expected::Zero(Quantity::Rho(RicciPart::Full)),
        Expected::Zero(Quantity::RhoStar(RicciPart::Full)),
        Expected::FirstPairJAnti(false),
        Expected::Module(ModuleRelation::NotMember, "W3"),
        Expected::Module(ModuleRelation::NonzeroComponent, "W6"),
    ];

    let e8c = vec![
        Expected::Zero(Quantity::Rho(RicciPart::Full)),
        Expected::Zero(Quantity::RhoStar(RicciPart::Full)),
        Expected::FirstPairJAnti(false),
        Expected::Module(ModuleRelation::NonzeroComponent, "W6"),
        Expected::GrayZero,
    ];

    let generic = vec![Expected::EqualsP(theta.clone()), Expected::DKaehlerZero, Expected::GrayZero];
    let eps_rho = |e: &Rational, r: &Rational| vec![("epsilon", e.clone()), ("varrho", r.clone())];

    vec![
        CatalogEntry {
            label: "L5.2-1",
            aliases: vec![],
            assertion: "W1+W4",
            structure: s4.clone(),
            params: eps_rho(&one, &one),
            metric: metric_one(&one, &one),
            expected: e1,
        },
        CatalogEntry {
            label: "L5.2-2",
            aliases: vec![],
            assertion: "W2",
            structure: s4.clone(),
            params: eps_rho(&two, &m_one),
            metric: metric_one(&two, &m_one),
            expected: e2,
        },
        CatalogEntry {
            label: "L5.2-3",
            aliases: vec![],
            assertion: "W8",
            structure: s4.clone(),
            params: eps_rho(&two, &m_one),
            metric: metric_one(&two, &m_one),
            expected: e3,
        },
        CatalogEntry {
            label: "L5.2-4",
            aliases: vec![],
            assertion: "W9",
            structure: s4.clone(),
            params: vec![("epsilon", one.clone())],
            metric: metric_two(&one),
            expected: e4,
        },
        CatalogEntry {
            label: "L5.2-5",
            aliases: vec![],
            assertion: "W2+W5",
            structure: s6.clone(),
            params: eps_rho(&one, &one),
            metric: metric_three(&one, &one),
            expected: e5,
        },
        CatalogEntry {
            label: "L5.2-6",
            aliases: vec!["L5.2-W3"],
            assertion: "W3",
            structure: s4.clone(),
            params: vec![],
            metric: metric_w3(),
            expected: e6,
        },
        CatalogEntry {
            label: "L5.2-7",
            aliases: vec!["L5.2-W10"],
            assertion: "W10",
            structure: s6,
            params: vec![],
            metric: metric_w10(),
            expected: e7,
        },
        CatalogEntry {
            label: "L5.2-8",
            aliases: vec!["L5.2-W6"],
            assertion: "W6",
            structure: s8,
            params: vec![],
            metric: metric_w6(),
            expected: e8,
        },
        CatalogEntry {
            label: "L5.2-8c",
            aliases: vec!["L5.2-W6c"],
            assertion: "W6",
            structure: standard_para_hermitian(4).unwrap(),
            params: vec![],
            metric: metric_w6_corrected(),
            expected: e8c,
        },
        CatalogEntry {
            label: "L4.1",
            aliases: vec!["generic"],
            assertion: "realization",
            structure: s4.clone(),
            params: vec![],
            metric: p_realizing_metric(&theta, &s4).expect("generic theta is admissible"),
            expected: generic,
        },
    ]
}

pub fn catalog_labels() -> Vec<&'static str> {
    catalog().iter().map(|e| e.label).collect()
}

pub fn catalog_entry(label: &str) -> Result<CatalogEntry> {
    catalog().into_iter().find(|e| e.matches(label)).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Expands `A(a,b,c,d) = v` over antisymmetry in each pair and pair exchange.
/// Fails with the clashing index if two listed entries disagree.
pub fn expand_orbits(dim: usize, list: &[([usize; 4], Rational)]) -> std::result::Result<Tensor4, [usize; 4]> {
    let mut t = Tensor4::zeros(dim);
    let mut set = vec![false; dim.pow(4)];
    for ([a, b, c, d], v) in list {
        let images = [
            ([*a, *b, *c, *d], v.clone()),
            ([*b, *a, *c, *d], -v),
            ([*a, *b, *d, *c], -v),
            ([*b, *a, *d, *c], v.clone()),
            ([*c, *d, *a, *b], v.clone()),
            ([*d, *c, *a, *b], -v),
            ([*c, *d, *b, *a], -v),
            ([*d, *c, *b, *a], v.clone()),
        ];
        for (idx, w) in images {
            let i = t.flatten(idx);
            if set[i] && t.get(idx) != &w {
                return Err(idx);
            }
            set[i] = true;
            t.set(idx, w);
        }
    }
    Ok(t)
}

/// Everything computed from the curvature at the origin.
struct Evaluated {
    a: Tensor4,
    a_star: Tensor4,
    ricci: RicciData,
}

impl Evaluated {
    fn tensor2(&self, q: Quantity, s: &Structure) -> Tensor2 {
        let (base, part) = match q {
            Quantity::Rho(p) => (&self.ricci.rho, p),
            Quantity::RhoStar(p) => (&self.ricci.rho_star, p),
            _ => unreachable!("not a 2-tensor"),
        };
        let half = Rational::new(1, 2);
        match part {
            RicciPart::Full => base.clone(),
            RicciPart::Sym => base.add(&base.transpose()).scale(&half),
            RicciPart::Skew => base.sub(&base.transpose()).scale(&half),
            _ => {
                let d = decompose_two_tensor(base, s);
                // Para: "+" is the opposite eigenvalue, "0,-" the trace-free same one.
                match part {
                    RicciPart::PlusSym => d.sym_opposite,
                    RicciPart::ZeroMinusSym => d.sym_same_0,
                    RicciPart::PlusSkew => d.skew_opposite,
                    RicciPart::ZeroMinusSkew => d.skew_same_0,
                    _ => unreachable!(),
                }
            }
        }
    }

    fn is_zero(&self, q: Quantity, s: &Structure) -> bool {
        match q {
            Quantity::Curvature => self.a.is_zero(),
            Quantity::CurvatureStar => self.a_star.is_zero(),
            _ => self.tensor2(q, s).is_zero(),
        }
    }
}

fn index_name(n: usize, i: usize) -> String {
    if i < n {
        format!("x{}", i + 1)
    } else {
        format!("y{}", i - n + 1)
    }
}

fn tuple_name(n: usize, idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|&i| index_name(n, i)).collect();
    format!("({})", parts.join(","))
}

/// Evaluates every expectation of `entry`. A module table is built when one
/// is needed and `table` is `None`.
pub fn evaluate_entry(entry: &CatalogEntry, table: Option<&ModuleTable>) -> Result<Vec<CheckRecord>> {
    let s = &entry.structure;
    let n = s.n();
    let dim = s.dim();
    let origin = vec![Rational::zero(); dim];
    let a = riemann_at(&entry.metric, &origin)?;
    let ev = Evaluated { a_star: a.apply_slots(s.j(), &[2, 3]), ricci: ricci(&a, s)?, a };
    let built;
    let table = match table {
        Some(t) => Some(t),
        None if entry.needs_table() => {
            built = module_table(s)?;
            Some(&built)
        }
        None => None,
    };
    let coord = |name: &str| parse_coord(n, name).ok_or_else(|| Error::InvalidStructure(format!("bad coordinate {name}")));
    let mut out = Vec::new();
    for exp in &entry.expected {
        let rec = match exp {
            Expected::Entries { quantity, entries, complete } => {
                let name = format!("{quantity} table");
                let mut witness = None;
                match quantity {
                    Quantity::Curvature | Quantity::CurvatureStar => {
                        let t = if *quantity == Quantity::Curvature { &ev.a } else { &ev.a_star };
                        let mut list = Vec::new();
                        for (names, v) in entries {
                            let idx: Vec<usize> = names.iter().map(|x| coord(x)).collect::<Result<_>>()?;
                            let idx = [idx[0], idx[1], idx[2], idx[3]];
                            if t.get(idx) != v && witness.is_none() {
                                witness = Some(format!("{} = {}, expected {}", tuple_name(n, &idx), t.get(idx), v));
                            }
                            list.push((idx, v.clone()));
                        }
                        if *complete && witness.is_none() {
                            match expand_orbits(dim, &list) {
                                Err(idx) => witness = Some(format!("table clashes at {}", tuple_name(n, &idx))),
                                Ok(full) => {
                                    if let Some((idx, v)) = t.sub(&full).nonzero_entries().first() {
                                        witness = Some(format!(
                                            "unlisted {} = {}",
                                            tuple_name(n, idx),
                                            &full.get(*idx).clone() + v
                                        ));
                                    }
                                }
                            }
                        }
                    }
                    _ => {
                        let t = ev.tensor2(*quantity, s);
                        let mut listed = vec![false; dim * dim];
                        for (names, v) in entries {
                            let (i, j) = (coord(names[0])?, coord(names[1])?);
                            listed[i * dim + j] = true;
                            if t.get(i, j) != v && witness.is_none() {
                                witness = Some(format!("{} = {}, expected {}", tuple_name(n, &[i, j]), t.get(i, j), v));
                            }
                        }
                        if *complete && witness.is_none() {
                            'outer: for i in 0..dim {
                                for j in 0..dim {
                                    if !listed[i * dim + j] && !listed[j * dim + i] && !t.get(i, j).is_zero() {
                                        witness = Some(format!("unlisted {} = {}", tuple_name(n, &[i, j]), t.get(i, j)));
                                        break 'outer;
                                    }
                                }
                            }
                        }
                    }
                }
                CheckRecord { name, passed: witness.is_none(), witness }
            }
            Expected::Tau(v) => scalar_record("tau", &ev.ricci.tau, v),
            Expected::TauStar(v) => scalar_record("tau*", &ev.ricci.tau_star, v),
            Expected::Zero(qty) => flag_record(format!("{qty} = 0"), ev.is_zero(*qty, s)),
            Expected::Nonzero(qty) => flag_record(format!("{qty} != 0"), !ev.is_zero(*qty, s)),
            Expected::Equal(x, y) => {
                let ok = ev.tensor2(*x, s) == ev.tensor2(*y, s);
                flag_record(format!("{x} = {y}"), ok)
            }
            Expected::FirstPairJAnti(holds) => {
                let ok = (ev.a.apply_slots(s.j(), &[0, 1]) == ev.a.neg()) == *holds;
                let rel = if *holds { "=" } else { "!=" };
                flag_record(format!("A(Jx,Jy,z,w) {rel} -A(x,y,z,w)"), ok)
            }
            Expected::JStarAnti => flag_record("J*A = -A".into(), ev.a.pullback(s.j()) == ev.a.neg()),
            Expected::Module(rel, label) => {
                let t = table.expect("table built above");
                let c = t.component_in(&ev.a, label)?;
                let (name, ok) = match rel {
                    ModuleRelation::Member => (format!("A in {label}"), c == ev.a),
                    ModuleRelation::NotMember => (format!("A not in {label}"), c != ev.a),
                    ModuleRelation::NonzeroComponent => (format!("A has a nonzero {label} component"), !c.is_zero()),
                };
                flag_record(name, ok)
            }
            Expected::EqualsP(theta) => {
                let p = p_operator(theta);
                let witness = ev.a.sub(&p).nonzero_entries().first().map(|(i, _)| tuple_name(n, i));
                CheckRecord { name: "A = P(theta)".into(), passed: witness.is_none(), witness }
            }
            Expected::DKaehlerZero => {
                let d = d_kaehler_at(&entry.metric, s, &origin)?;
                let witness = d.nonzero_entries().first().map(|(i, _)| tuple_name(n, i));
                CheckRecord { name: "dOmega = 0 at origin".into(), passed: witness.is_none(), witness }
            }
            Expected::GrayZero => {
                let g = gray_symmetrize(&ev.a, s)?;
                let witness = g.nonzero_entries().first().map(|(i, _)| tuple_name(n, i));
                CheckRecord { name: "Gray identity".into(), passed: witness.is_none(), witness }
            }
        };
        out.push(rec);
    }
    Ok(out)
}

fn scalar_record(name: &str, got: &Rational, want: &Rational) -> CheckRecord {
    let passed = got == want;
    CheckRecord {
        name: format!("{name} = {want}"),
        passed,
        witness: (!passed).then(|| format!("{name} = {got}")),
    }
}

fn flag_record(name: String, passed: bool) -> CheckRecord {
    CheckRecord { name, passed, witness: (!passed).then(|| "false".to_string()) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::{quadratic_theta, realization_metric};

    fn all_pass(label: &str) {
        let e = catalog_entry(label).unwrap();
        let recs = evaluate_entry(&e, None).unwrap();
        let failed: Vec<_> = recs.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{label}: {failed:?}");
    }

    #[test]
    fn small_entries_reproduce_tables() {
        for l in ["L5.2-1", "L5.2-2", "L5.2-3", "L5.2-4", "L5.2-W3", "L4.1"] {
            all_pass(l);
        }
    }

    #[test]
    fn metric_one_params_sweep() {
        for (e, r) in [(1, 0), (0, 1), (3, -2), (-1, 5)] {
            let entry = catalog_entry_with("L5.2-1", &q(e), &q(r)).unwrap();
            let recs = evaluate_entry(&entry, None).unwrap();
            assert!(recs.iter().all(|r| r.passed), "{recs:?}");
        }
        let a = catalog_entry_with("L5.2-4", &Rational::new(-3, 2), &q(0)).unwrap();
        assert!(evaluate_entry(&a, None).unwrap().iter().all(|r| r.passed));
    }

    #[test]
    fn metrics_are_realizations() {
        let s = standard_para_hermitian(2).unwrap();
        let m = metric_one(&q(1), &q(1));
        assert!(m.is_compatible(s.j(), crate::model::Kind::ParaHermitian));
        let theta = quadratic_theta(&m);
        assert_eq!(realization_metric(&theta, &s).unwrap(), m);
        for e in catalog() {
            assert!(e.metric.is_compatible(e.structure.j(), e.structure.kind()), "{}", e.label);
            assert_eq!(e.metric.background(), *e.structure.form());
        }
    }

    #[test]
    fn wrong_table_is_caught() {
        let mut e = catalog_entry("L5.2-4").unwrap();
        e.expected = vec![Expected::Entries {
            quantity: Quantity::Curvature,
            entries: entries(&[(&["x1", "y1", "y2", "x1"], q(3))]),
            complete: true,
        }];
        let r = evaluate_entry(&e, None).unwrap();
        assert!(!r[0].passed);
        assert!(r[0].witness.as_deref().unwrap().contains("(x1,y1,y2,x1)"));
        assert!(matches!(catalog_entry("L9"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn orbit_clash() {
        let list = [([0, 1, 0, 1], q(1)), ([1, 0, 0, 1], q(1))];
        assert!(expand_orbits(2, &list).is_err());
    }
}
