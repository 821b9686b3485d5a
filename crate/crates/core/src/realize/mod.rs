//! Polynomial metrics and their curvature at rational points.
//!
//! Coordinates on the standard model are `(x_1..x_n, y_1..y_n) = (u_1..u_2n)`,
//! so `x_i` is index `i-1` and `y_i` is index `n+i-1`.

mod catalog;
mod poly;
mod suite;

pub use catalog::{
    catalog, catalog_entry, catalog_entry_with, catalog_labels, evaluate_entry, expand_orbits, generic_theta,
    metric_one, metric_three, metric_two, CatalogEntry, CheckRecord, Expected, ModuleRelation, Quantity, RicciPart,
};
pub use poly::Poly;
pub use suite::{
    check_metric_suite, non_quadratic_metric, random_point, random_theta, realization_suite, MetricCheck, SuiteConfig,
    SuiteSummary,
};

use serde_json::{json, Value};

use crate::curvature::Tensor4;
use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Rational};
use crate::model::{Kind, Structure};

/// Symmetric matrix of polynomials in `dim` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMetric {
    dim: usize,
    comps: Vec<Poly>,
}

impl PolyMetric {
    /// Fails unless `comps` is a symmetric `dim × dim` array.
    pub fn new(dim: usize, comps: Vec<Poly>) -> Result<Self> {
        if comps.len() != dim * dim || comps.iter().any(|p| p.nvars() != dim) {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: comps.len() });
        }
        let m = PolyMetric { dim, comps };
        for a in 0..dim {
            for b in a + 1..dim {
                if m.get(a, b) != m.get(b, a) {
                    return Err(Error::InvalidStructure(format!("metric entries ({}, {}) not symmetric", a + 1, b + 1)));
                }
            }
        }
        Ok(m)
    }

    /// The constant metric with matrix `m`.
    pub fn constant(m: &Matrix<Rational>) -> Self {
        let dim = m.rows();
        let comps = m.entries().iter().map(|c| Poly::constant(dim, c.clone())).collect();
        PolyMetric { dim, comps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> &Poly {
        &self.comps[a * self.dim + b]
    }

    /// Adds `c · (du_a ∘ du_b)` where `∘` is the symmetric product
    /// `½(du_a ⊗ du_b + du_b ⊗ du_a)`.
    pub fn add_sym_product(&mut self, a: usize, b: usize, c: &Poly) {
        if a == b {
            let i = a * self.dim + a;
            self.comps[i] = self.comps[i].add(c);
        } else {
            let half = c.scale(&Rational::new(1, 2));
            for (p, q) in [(a, b), (b, a)] {
                let i = p * self.dim + q;
                self.comps[i] = self.comps[i].add(&half);
            }
        }
    }

    /// Value at the origin.
    pub fn background(&self) -> Matrix<Rational> {
        self.eval(&vec![Rational::zero(); self.dim])
    }

    pub fn eval(&self, point: &[Rational]) -> Matrix<Rational> {
        Matrix::from_fn(self.dim, self.dim, |a, b| self.get(a, b).eval(point))
    }

    /// `(M^* g)_{ab} = M[c][a] M[d][b] g_{cd}` for a constant matrix `M`.
    pub fn pullback(&self, m: &Matrix<Rational>) -> Self {
        let d = self.dim;
        let mut comps = vec![Poly::zero(d); d * d];
        for a in 0..d {
            for b in 0..d {
                let mut acc = Poly::zero(d);
                for c in 0..d {
                    let mca = m.get(c, a);
                    if mca.is_zero() {
                        continue;
                    }
                    for e in 0..d {
                        let meb = m.get(e, b);
                        if meb.is_zero() {
                            continue;
                        }
                        acc = acc.add(&self.get(c, e).scale(&(mca * meb)));
                    }
                }
                comps[a * d + b] = acc;
            }
        }
        PolyMetric { dim: d, comps }
    }

    pub fn add(&self, o: &Self) -> Self {
        PolyMetric { dim: self.dim, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        PolyMetric { dim: self.dim, comps: self.comps.iter().map(|p| p.scale(s)).collect() }
    }

    /// True iff `J^*g = λ g` as a polynomial identity, with `λ` the form sign of `kind`.
    pub fn is_compatible(&self, j: &Matrix<Rational>, kind: Kind) -> bool {
        self.pullback(j) == self.scale(&Rational::from(kind.form_sign()))
    }

    pub fn degree(&self) -> u32 {
        self.comps.iter().map(Poly::degree).max().unwrap_or(0)
    }

    /// JSON with 1-based `row <= col` components and `[exponents, "p/q"]` monomials.
    pub fn to_json(&self) -> Value {
        let mut comps = Vec::new();
        for a in 0..self.dim {
            for b in a..self.dim {
                let p = self.get(a, b);
                if p.is_zero() {
                    continue;
                }
                let monos: Vec<Value> = p.terms().map(|(e, c)| json!([e, c.to_pq_string()])).collect();
                comps.push(json!({"row": a + 1, "col": b + 1, "monomials": monos}));
            }
        }
        json!({"dim": self.dim, "components": comps})
    }

    /// Parses [`PolyMetric::to_json`] output. A component given only once is
    /// mirrored; one given twice must agree.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: String| Error::Parse { line: 0, message: m };
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing dim".into()))? as usize;
        let comps_v = v.get("components").and_then(Value::as_array).ok_or_else(|| bad("missing components".into()))?;
        let mut comps: Vec<Option<Poly>> = vec![None; dim * dim];
        for c in comps_v {
            let idx = |k: &str| -> Result<usize> {
                let i = c.get(k).and_then(Value::as_u64).ok_or_else(|| bad(format!("missing {k}")))? as usize;
                if i == 0 || i > dim {
                    return Err(bad(format!("{k} {i} outside 1..={dim}")));
                }
                Ok(i - 1)
            };
            let (a, b) = (idx("row")?, idx("col")?);
            let mut p = Poly::zero(dim);
            for m in c.get("monomials").and_then(Value::as_array).ok_or_else(|| bad("missing monomials".into()))? {
                let pair = m.as_array().filter(|x| x.len() == 2).ok_or_else(|| bad("monomial must be [exps, value]".into()))?;
                let exps: Vec<u32> = pair[0]
                    .as_array()
                    .ok_or_else(|| bad("exponents must be a list".into()))?
                    .iter()
                    .map(|x| x.as_u64().map(|k| k as u32).ok_or_else(|| bad("bad exponent".into())))
                    .collect::<Result<_>>()?;
                if exps.len() != dim {
                    return Err(bad(format!("exponent vector of length {} for dim {dim}", exps.len())));
                }
                let val: Rational = pair[1]
                    .as_str()
                    .ok_or_else(|| bad("coefficient must be a \"p/q\" string".into()))?
                    .parse()
                    .map_err(|e| bad(format!("{e}")))?;
                p = p.add(&Poly::monomial(dim, exps, val));
            }
            for (r, s) in [(a, b), (b, a)] {
                match &comps[r * dim + s] {
                    Some(q) if *q != p && r != s && (a, b) == (r, s) => {
                        return Err(bad(format!("component ({}, {}) given twice", r + 1, s + 1)))
                    }
                    Some(q) if *q != p => {
                        return Err(bad(format!("components ({}, {}) and ({}, {}) disagree", a + 1, b + 1, b + 1, a + 1)))
                    }
                    _ => comps[r * dim + s] = Some(p.clone()),
                }
            }
        }
        PolyMetric::new(dim, comps.into_iter().map(|p| p.unwrap_or_else(|| Poly::zero(dim))).collect())
    }
}

/// Values of a metric and its first two derivatives at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoint {
    pub point: Vec<Rational>,
    pub g: Matrix<Rational>,
    /// `dg[c]` is `∂_c g`.
    pub dg: Vec<Matrix<Rational>>,
    /// `ddg[c * dim + e]` is `∂_c ∂_e g`.
    pub ddg: Vec<Matrix<Rational>>,
    pub g_inv: Matrix<Rational>,
}

impl JetPoint {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    /// `∂_c g_{ab}`.
    pub fn d1(&self, c: usize, a: usize, b: usize) -> &Rational {
        self.dg[c].get(a, b)
    }

    /// `∂_c ∂_e g_{ab}`.
    pub fn d2(&self, c: usize, e: usize, a: usize, b: usize) -> &Rational {
        self.ddg[c * self.dim() + e].get(a, b)
    }
}

pub fn jet_at(m: &PolyMetric, point: &[Rational]) -> Result<JetPoint> {
    let d = m.dim();
    if point.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: point.len() });
    }
    let g = m.eval(point);
    let g_inv = g.inverse().ok_or(Error::SingularAtPoint)?;
    let first: Vec<Vec<Poly>> = (0..d).map(|c| m.comps.iter().map(|p| p.derivative(c)).collect()).collect();
    let dg = first
        .iter()
        .map(|ps| Matrix::from_fn(d, d, |a, b| ps[a * d + b].eval(point)))
        .collect();
    let mut ddg = Vec::with_capacity(d * d);
    for c in 0..d {
        for e in 0..d {
            ddg.push(Matrix::from_fn(d, d, |a, b| first[c][a * d + b].derivative(e).eval(point)));
        }
    }
    Ok(JetPoint { point: point.to_vec(), g, dg, ddg, g_inv })
}

/// `R(∂_a, ∂_b, ∂_c, ∂_d)` with `R_{abcd} = g_{df} R_{abc}^f` and
/// `R_{abc}^d = ∂_a Γ_{bc}^d - ∂_b Γ_{ac}^d + Γ_{ae}^d Γ_{bc}^e - Γ_{be}^d Γ_{ac}^e`.
pub fn riemann_at(m: &PolyMetric, point: &[Rational]) -> Result<Tensor4> {
    Ok(riemann_from_jet(&jet_at(m, point)?))
}

pub fn riemann_from_jet(j: &JetPoint) -> Tensor4 {
    let n = j.dim();
    let half = Rational::new(1, 2);
    let i3 = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    // Γ_{abc} = ½(g_{bc/a} + g_{ac/b} - g_{ab/c})
    let mut gamma_low = vec![Rational::zero(); n * n * n];
    // ∂_e Γ_{abc}
    let mut dgamma_low = vec![Rational::zero(); n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                gamma_low[i3(a, b, c)] = &(&(j.d1(a, b, c) + j.d1(b, a, c)) - j.d1(c, a, b)) * &half;
                for e in 0..n {
                    dgamma_low[i3(a, b, c) * n + e] =
                        &(&(j.d2(a, e, b, c) + j.d2(b, e, a, c)) - j.d2(c, e, a, b)) * &half;
                }
            }
        }
    }
    // Γ_{ab}^d = g^{cd} Γ_{abc}
    let mut gamma = vec![Rational::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let mut acc = Rational::zero();
                for c in 0..n {
                    let gi = j.g_inv.get(c, d);
                    if !gi.is_zero() {
                        acc += &(gi * &gamma_low[i3(a, b, c)]);
                    }
                }
                gamma[i3(a, b, d)] = acc;
            }
        }
    }
    // ∂_e g^{cd} = -g^{cp} g_{pq/e} g^{qd}
    let mut dginv = vec![Rational::zero(); n * n * n];
    for e in 0..n {
        let prod = j.g_inv.mul(&j.dg[e]).and_then(|x| x.mul(&j.g_inv)).expect("square");
        for c in 0..n {
            for d in 0..n {
                dginv[i3(e, c, d)] = -prod.get(c, d).clone();
            }
        }
    }
    // ∂_e Γ_{ab}^d, stored at [((e a) b) d]
    let mut dgamma = vec![Rational::zero(); n * n * n * n];
    for e in 0..n {
        for a in 0..n {
            for b in a..n {
                for d in 0..n {
                    let mut acc = Rational::zero();
                    for c in 0..n {
                        let x = &dginv[i3(e, c, d)];
                        if !x.is_zero() {
                            acc += &(x * &gamma_low[i3(a, b, c)]);
                        }
                        let y = j.g_inv.get(c, d);
                        if !y.is_zero() {
                            acc += &(y * &dgamma_low[i3(a, b, c) * n + e]);
                        }
                    }
                    dgamma[i3(e, b, a) * n + d] = acc.clone();
                    dgamma[i3(e, a, b) * n + d] = acc;
                }
            }
        }
    }
    let mut r_up = vec![Rational::zero(); n * n * n * n];
    // Antisymmetric in (a, b): fill a < b and mirror.
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = &dgamma[i3(a, b, c) * n + d] - &dgamma[i3(b, a, c) * n + d];
                    for e in 0..n {
                        v += &(&gamma[i3(a, e, d)] * &gamma[i3(b, c, e)]);
                        v -= &(&gamma[i3(b, e, d)] * &gamma[i3(a, c, e)]);
                    }
                    r_up[i3(b, a, c) * n + d] = -&v;
                    r_up[i3(a, b, c) * n + d] = v;
                }
            }
        }
    }
    Tensor4::from_fn(n, |[a, b, c, d]| {
        let mut acc = Rational::zero();
        if a == b {
            return acc;
        }
        for f in 0..n {
            let gdf = j.g.get(d, f);
            if !gdf.is_zero() {
                acc += &(gdf * &r_up[i3(a, b, c) * n + f]);
            }
        }
        acc
    })
}

/// Dense `dim^3` array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Array3 {
    dim: usize,
    data: Vec<Rational>,
}

impl Array3 {
    pub fn zeros(dim: usize) -> Self {
        Array3 { dim, data: vec![Rational::zero(); dim.pow(3)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.data[(a * self.dim + b) * self.dim + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: Rational) {
        let n = self.dim;
        self.data[(a * n + b) * n + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    /// Nonzero entries as `([a, b, c], value)`.
    pub fn nonzero_entries(&self) -> Vec<([usize; 3], Rational)> {
        let n = self.dim;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| ([i / (n * n), (i / n) % n, i % n], v.clone()))
            .collect()
    }
}

/// `(dΩ)_{abc} = ∂_aΩ_{bc} + ∂_bΩ_{ca} + ∂_cΩ_{ab}` at `point`, for
/// `Ω_{ab} = g(∂_a, J∂_b)` with `J = s.j()` constant in coordinates.
/// No `1/3` normalization.
pub fn d_kaehler_at(m: &PolyMetric, s: &Structure, point: &[Rational]) -> Result<Array3> {
    let n = m.dim();
    if s.dim() != n || point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.dim().max(point.len()) });
    }
    let j = s.j();
    let omega = |a: usize, b: usize| -> Poly {
        let mut acc = Poly::zero(n);
        for c in 0..n {
            let jcb = j.get(c, b);
            if !jcb.is_zero() {
                acc = acc.add(&m.get(a, c).scale(jcb));
            }
        }
        acc
    };
    let om: Vec<Poly> = (0..n * n).map(|i| omega(i / n, i % n)).collect();
    let d_om = |e: usize, a: usize, b: usize| om[a * n + b].derivative(e).eval(point);
    let mut out = Array3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = &(&d_om(a, b, c) + &d_om(b, c, a)) + &d_om(c, a, b);
                out.set(a, b, c, v);
            }
        }
    }
    Ok(out)
}

/// Matrix of polynomials acting on coordinate vector fields:
/// `J ∂_j = sum_i J[i][j] ∂_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(dim: usize, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        Ok(PolyMatrix { dim, entries })
    }

    pub fn constant(m: &Matrix<Rational>) -> Self {
        let dim = m.rows();
        PolyMatrix { dim, entries: m.entries().iter().map(|c| Poly::constant(dim, c.clone())).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.dim + j] = p;
    }

    pub fn eval(&self, point: &[Rational]) -> Matrix<Rational> {
        Matrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).eval(point))
    }
}

/// `N(∂_i, ∂_j)^k` with `N(x,y) = σ[x,y] - J[Jx,y] - J[x,Jy] + [Jx,Jy]`,
/// `σ = +1` for para-complex and `-1` for complex `J`. Coordinate fields
/// commute, so only derivatives of `J` at the point enter.
pub fn nijenhuis_at(j_field: &PolyMatrix, kind: Kind, point: &[Rational]) -> Result<Array3> {
    let n = j_field.dim();
    if point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: point.len() });
    }
    let j0 = j_field.eval(point);
    let target = Matrix::identity(n).scale(&Rational::from(kind.j_square_sign()));
    if j0.mul(&j0)? != target {
        return Err(Error::NotAlmostStructure {
            expected: if kind == Kind::ParaHermitian { "Id" } else { "-Id" },
        });
    }
    // dj[a][k][i] = ∂_a J[k][i]
    let dj: Vec<Matrix<Rational>> =
        (0..n).map(|a| Matrix::from_fn(n, n, |k, i| j_field.get(k, i).derivative(a).eval(point))).collect();
    let mut out = Array3::zeros(n);
    for i in 0..n {
        for jj in 0..n {
            // [J∂_i, ∂_j]^m = -∂_j J[m][i];  [∂_i, J∂_j]^m = ∂_i J[m][j]
            let br1: Vec<Rational> = (0..n).map(|m| -dj[jj].get(m, i).clone()).collect();
            let br2: Vec<Rational> = (0..n).map(|m| dj[i].get(m, jj).clone()).collect();
            for k in 0..n {
                let mut v = Rational::zero();
                for m in 0..n {
                    let jkm = j0.get(k, m);
                    if !jkm.is_zero() {
                        v -= &(jkm * &(&br1[m] + &br2[m]));
                    }
                }
                // [J∂_i, J∂_j]^k = J[a][i] ∂_a J[k][j] - J[a][j] ∂_a J[k][i]
                for a in 0..n {
                    v += &(j0.get(a, i) * dj[a].get(k, jj));
                    v -= &(j0.get(a, jj) * dj[a].get(k, i));
                }
                out.set(i, jj, k, v);
            }
        }
    }
    Ok(out)
}

/// `g_ij = form_ij + 2 Θ_ijkl u^k u^l` for `Θ` in `S^2_- ⊗ S^2`.
pub fn realization_metric(theta: &Tensor4, s: &Structure) -> Result<PolyMetric> {
    s.require_para()?;
    let n = s.dim();
    if theta.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: theta.dim() });
    }
    if theta.permute([1, 0, 2, 3]) != *theta {
        return Err(Error::SlotSymmetryViolation("first pair"));
    }
    if theta.permute([0, 1, 3, 2]) != *theta {
        return Err(Error::SlotSymmetryViolation("second pair"));
    }
    if theta.apply_slots(s.j(), &[0, 1]) != theta.neg() {
        return Err(Error::JConditionViolation);
    }
    let two = Rational::from(2);
    let mut comps = Vec::with_capacity(n * n);
    for i in 0..n {
        for jj in 0..n {
            let mut p = Poly::constant(n, s.form().get(i, jj).clone());
            for k in 0..n {
                for l in 0..n {
                    let c = theta.get([i, jj, k, l]);
                    if c.is_zero() {
                        continue;
                    }
                    let mut e = vec![0u32; n];
                    e[k] += 1;
                    e[l] += 1;
                    p = p.add(&Poly::monomial(n, e, c * &two));
                }
            }
            comps.push(p);
        }
    }
    PolyMetric::new(n, comps)
}

/// Metric whose curvature at the origin is exactly `𝒫(Θ)`.
///
/// The curvature of `realization_metric(Θ)` at the origin is `2𝒫(Θ)`
/// (`∂_k∂_l g_ij = 4Θ_ijkl` and the curvature takes half of the second
/// derivatives), so this is `realization_metric(Θ/2)`.
pub fn p_realizing_metric(theta: &Tensor4, s: &Structure) -> Result<PolyMetric> {
    realization_metric(&theta.scale(&Rational::new(1, 2)), s)
}

/// `Θ_ijkl = ¼ ∂_k ∂_l g_ij` at the origin, so that a metric `Ξ + O(|u|²)`
/// with only quadratic terms equals `realization_metric` of the result.
pub fn quadratic_theta(m: &PolyMetric) -> Tensor4 {
    let n = m.dim();
    let origin = vec![Rational::zero(); n];
    let quarter = Rational::new(1, 4);
    let second: Vec<Poly> = (0..n * n)
        .flat_map(|i| {
            let p = &m.comps[i];
            (0..n).flat_map(move |k| (0..n).map(move |l| p.derivative(k).derivative(l)))
        })
        .collect();
    Tensor4::from_fn(n, |[i, j, k, l]| &second[((i * n + j) * n + k) * n + l].eval(&origin) * &quarter)
}

/// Index of coordinate `x_i` (`y = false`) or `y_i` (`y = true`), 1-based `i`.
pub fn coord_index(n: usize, i: usize, y: bool) -> usize {
    assert!(i >= 1 && i <= n, "coordinate index");
    if y {
        n + i - 1
    } else {
        i - 1
    }
}

/// Parses names like `x1` or `y3` into coordinate indices.
pub fn parse_coord(n: usize, name: &str) -> Option<usize> {
    let (kind, rest) = name.split_at(1);
    let i: usize = rest.parse().ok()?;
    if i == 0 || i > n {
        return None;
    }
    match kind {
        "x" => Some(i - 1),
        "y" => Some(n + i - 1),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::is_algebraic_curvature;
    use crate::gray::p_operator;
    use crate::model::{standard_hermitian, standard_para_hermitian};

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    /// `R_abcd = ½(g_db,ca + g_ca,db - g_da,cb - g_cb,da) + g_ζη(Γ^ζ_ca Γ^η_db - Γ^ζ_cb Γ^η_da)`,
    /// a route that never differentiates the inverse metric.
    fn riemann_oracle(j: &JetPoint) -> Tensor4 {
        let n = j.dim();
        let half = q(1, 2);
        let low = |a: usize, b: usize, c: usize| &(&(j.d1(a, b, c) + j.d1(b, a, c)) - j.d1(c, a, b)) * &half;
        let up = |a: usize, b: usize, d: usize| -> Rational {
            (0..n).map(|c| j.g_inv.get(c, d) * &low(a, b, c)).sum()
        };
        let gam: Vec<Rational> = (0..n * n * n).map(|i| up(i / (n * n), (i / n) % n, i % n)).collect();
        let g3 = |a: usize, b: usize, d: usize| &gam[(a * n + b) * n + d];
        Tensor4::from_fn(n, |[a, b, c, d]| {
            let lin = &(&(&(j.d2(c, a, d, b) + j.d2(d, b, c, a)) - j.d2(c, b, d, a)) - j.d2(d, a, c, b)) * &half;
            let mut quad = Rational::zero();
            for z in 0..n {
                for h in 0..n {
                    let g = j.g.get(z, h);
                    if g.is_zero() {
                        continue;
                    }
                    quad += &(g * &(&(g3(c, a, z) * g3(d, b, h)) - &(g3(c, b, z) * g3(d, a, h))));
                }
            }
            &lin + &quad
        })
    }

    fn sample_metric(n: usize) -> PolyMetric {
        let d = 2 * n;
        let s = standard_para_hermitian(n).unwrap();
        let mut m = PolyMetric::constant(s.form());
        for a in 0..d {
            for b in a..d {
                let mut p = Poly::zero(d);
                for k in 0..d {
                    let e1: Vec<u32> = (0..d).map(|t| (t == k) as u32 + (t == (k + a) % d) as u32).collect();
                    p = p.add(&Poly::monomial(d, e1, q(((a + 2 * b + k) % 5) as i64 - 2, 3)));
                }
                let e3: Vec<u32> = (0..d).map(|t| (t == a) as u32 * 3).collect();
                p = p.add(&Poly::monomial(d, e3, q((b as i64) - 1, 2)));
                m.add_sym_product(a, b, &p);
            }
        }
        m
    }

    #[test]
    fn riemann_matches_oracle_off_origin() {
        let m = sample_metric(2);
        let pt = vec![q(1, 4), q(-1, 2), q(0, 1), q(1, 2)];
        let jet = jet_at(&m, &pt).unwrap();
        let r = riemann_from_jet(&jet);
        assert_eq!(r, riemann_oracle(&jet));
        assert!(is_algebraic_curvature(&r));
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let s = standard_para_hermitian(2).unwrap();
        let m = PolyMetric::constant(s.form());
        let pt = vec![q(1, 2); 4];
        let j = jet_at(&m, &pt).unwrap();
        assert!(j.dg.iter().all(Matrix::is_zero) && j.ddg.iter().all(Matrix::is_zero));
        assert_eq!(j.g_inv, s.form().inverse().unwrap());
        assert!(riemann_at(&m, &pt).unwrap().is_zero());
        assert!(d_kaehler_at(&m, &s, &pt).unwrap().is_zero());
    }

    #[test]
    fn singular_point_is_reported() {
        let mut m = PolyMetric::constant(&Matrix::identity(2));
        m.add_sym_product(0, 0, &Poly::var(2, 0).scale(&q(-1, 1)));
        assert_eq!(jet_at(&m, &[q(1, 1), q(0, 1)]), Err(Error::SingularAtPoint));
    }

    fn sample_theta(s: &Structure) -> Tensor4 {
        let left = crate::gray::s2_basis(s, -1);
        let right = crate::gray::s2_full_basis(s.dim());
        let mut t = Tensor4::zeros(s.dim());
        for (i, a) in left.iter().enumerate() {
            for (k, b) in right.iter().enumerate() {
                let c = Rational::from(((3 * i + 7 * k) % 9) as i64 - 4);
                t = t.add(&Tensor4::outer(a, b).scale(&c));
            }
        }
        t
    }

    #[test]
    fn realization_at_origin() {
        let s = standard_para_hermitian(2).unwrap();
        let theta = sample_theta(&s);
        let m = realization_metric(&theta, &s).unwrap();
        assert!(m.is_compatible(s.j(), Kind::ParaHermitian));
        let origin = vec![Rational::zero(); 4];
        let jet = jet_at(&m, &origin).unwrap();
        assert!(jet.dg.iter().all(Matrix::is_zero));
        for c in 0..4 {
            for e in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        let sym = theta.get([i, j, c, e]) + theta.get([i, j, e, c]);
                        assert_eq!(jet.d2(c, e, i, j), &(&sym * &Rational::from(2)));
                    }
                }
            }
        }
        assert_eq!(riemann_at(&m, &origin).unwrap(), p_operator(&theta).scale(&Rational::from(2)));
        let half = p_realizing_metric(&theta, &s).unwrap();
        assert_eq!(riemann_at(&half, &origin).unwrap(), p_operator(&theta));
        assert!(d_kaehler_at(&m, &s, &origin).unwrap().is_zero());
        let flat = realization_metric(&Tensor4::zeros(4), &s).unwrap();
        assert_eq!(flat, PolyMetric::constant(s.form()));
    }

    #[test]
    fn realization_rejects_bad_theta() {
        let s = standard_para_hermitian(1).unwrap();
        let mut t = Tensor4::zeros(2);
        t.set([0, 1, 0, 0], Rational::one());
        assert_eq!(realization_metric(&t, &s), Err(Error::SlotSymmetryViolation("first pair")));
        let mut t = Tensor4::zeros(2);
        t.set([0, 0, 0, 1], Rational::one());
        assert_eq!(realization_metric(&t, &s), Err(Error::SlotSymmetryViolation("second pair")));
        let mut t = Tensor4::zeros(2);
        t.set([0, 0, 0, 0], Rational::one());
        assert_eq!(realization_metric(&t, &s), Err(Error::JConditionViolation));
        let h = standard_hermitian(0, 1).unwrap();
        assert_eq!(realization_metric(&Tensor4::zeros(2), &h), Err(Error::NotParaHermitian));
    }

    /// Brackets of polynomial vector fields expanded symbolically.
    fn nijenhuis_oracle(j: &PolyMatrix, sigma: i64, point: &[Rational]) -> Array3 {
        let n = j.dim();
        type Field = Vec<Poly>;
        let coord = |i: usize| -> Field { (0..n).map(|k| Poly::constant(n, Rational::from((k == i) as i64))).collect() };
        let apply = |x: &Field| -> Field {
            (0..n).map(|k| (0..n).fold(Poly::zero(n), |acc, m| acc.add(&j.get(k, m).mul(&x[m])))).collect()
        };
        let bracket = |x: &Field, y: &Field| -> Field {
            (0..n)
                .map(|k| {
                    (0..n).fold(Poly::zero(n), |acc, a| {
                        acc.add(&x[a].mul(&y[k].derivative(a))).sub(&y[a].mul(&x[k].derivative(a)))
                    })
                })
                .collect()
        };
        let mut out = Array3::zeros(n);
        for i in 0..n {
            for jj in 0..n {
                let (x, y) = (coord(i), coord(jj));
                let (jx, jy) = (apply(&x), apply(&y));
                let t1 = bracket(&x, &y);
                let t2 = apply(&bracket(&jx, &y));
                let t3 = apply(&bracket(&x, &jy));
                let t4 = bracket(&jx, &jy);
                for k in 0..n {
                    let v = t1[k].scale(&Rational::from(sigma)).sub(&t2[k]).sub(&t3[k]).add(&t4[k]);
                    out.set(i, jj, k, v.eval(point));
                }
            }
        }
        out
    }

    #[test]
    fn nijenhuis_examples() {
        let s = standard_para_hermitian(2).unwrap();
        let origin = vec![Rational::zero(); 4];
        let constant = PolyMatrix::constant(s.j());
        assert!(nijenhuis_at(&constant, Kind::ParaHermitian, &origin).unwrap().is_zero());
        // J = swap + linear perturbation vanishing at the origin.
        let mut field = constant.clone();
        field.set(0, 2, Poly::constant(4, Rational::one()).add(&Poly::var(4, 1)));
        field.set(1, 0, Poly::var(4, 2).scale(&q(2, 1)));
        let n = nijenhuis_at(&field, Kind::ParaHermitian, &origin).unwrap();
        assert!(!n.is_zero());
        assert_eq!(n, nijenhuis_oracle(&field, 1, &origin));
        let h = standard_hermitian(0, 2).unwrap();
        let mut hf = PolyMatrix::constant(h.j());
        hf.set(2, 0, Poly::constant(4, Rational::one()).add(&Poly::var(4, 3).mul(&Poly::var(4, 1))));
        hf.set(0, 1, Poly::var(4, 0));
        let pt = vec![Rational::zero(), Rational::zero(), q(1, 2), Rational::zero()];
        assert_eq!(nijenhuis_at(&hf, Kind::Hermitian, &pt).unwrap(), nijenhuis_oracle(&hf, -1, &pt));
        assert!(matches!(
            nijenhuis_at(&constant, Kind::Hermitian, &origin),
            Err(Error::NotAlmostStructure { .. })
        ));
    }

    #[test]
    fn metric_json_round_trip() {
        let m = sample_metric(2);
        let v = m.to_json();
        assert_eq!(PolyMetric::from_json(&v).unwrap(), m);
        let bad = json!({"dim": 2, "components": [{"row": 3, "col": 1, "monomials": []}]});
        assert!(matches!(PolyMetric::from_json(&bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn coordinate_names() {
        assert_eq!(parse_coord(2, "x1"), Some(0));
        assert_eq!(parse_coord(2, "y2"), Some(3));
        assert_eq!(parse_coord(2, "y3"), None);
        assert_eq!(coord_index(3, 2, true), 4);
    }
}
