//! Randomized checks over realization metrics and non-quadratic metrics.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{d_kaehler_at, jet_at, realization_metric, riemann_from_jet, Poly, PolyMetric};
use crate::curvature::{first_violation, Tensor4};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::gray::{gray_symmetrize, p_operator, s2_basis, s2_full_basis};
use crate::model::{standard_para_hermitian, Structure};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub dim: usize,
    pub seed: u64,
    /// Number of random `Θ`.
    pub samples: usize,
    pub points_per_metric: usize,
    /// Number of degree 3/4 metrics.
    pub polynomial_metrics: usize,
}

impl SuiteConfig {
    pub fn new(dim: usize, seed: u64, samples: usize) -> Self {
        SuiteConfig { dim, seed, samples, points_per_metric: 20, polynomial_metrics: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricCheck {
    /// `"realization"` or `"polynomial"`.
    pub family: &'static str,
    pub index: usize,
    /// Curvature at the origin equals `2𝒫(Θ)` for `realization_metric(Θ)`
    /// and `𝒫(Θ)` for `p_realizing_metric(Θ)`; realization metrics only.
    pub origin_equals_p: Option<bool>,
    pub d_kaehler_zero_at_origin: bool,
    pub points: usize,
    /// Points where the Gray symmetrization did not vanish, with an index.
    pub gray_failures: Vec<(Vec<Rational>, [usize; 4])>,
    /// Points where the curvature symmetries failed.
    pub curvature_failures: Vec<(Vec<Rational>, [usize; 4])>,
    pub resampled: usize,
    /// Points (off the origin) with `dΩ != 0`; informational.
    pub d_kaehler_nonzero_points: usize,
}

impl MetricCheck {
    pub fn passed(&self) -> bool {
        self.origin_equals_p != Some(false)
            && self.d_kaehler_zero_at_origin
            && self.gray_failures.is_empty()
            && self.curvature_failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub config: SuiteConfig,
    pub metrics: Vec<MetricCheck>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.metrics.iter().all(MetricCheck::passed)
    }

    fn family(&self, f: &str) -> impl Iterator<Item = &MetricCheck> + '_ {
        let f = f.to_string();
        self.metrics.iter().filter(move |m| m.family == f)
    }

    /// Realization metrics whose origin curvature equals `𝒫(Θ)`.
    pub fn origin_matches(&self) -> (usize, usize) {
        let all: Vec<_> = self.family("realization").collect();
        (all.iter().filter(|m| m.origin_equals_p == Some(true)).count(), all.len())
    }

    /// (passing, total) for the Gray identity over every metric and point.
    pub fn gray_points(&self) -> (usize, usize) {
        let total: usize = self.metrics.iter().map(|m| m.points).sum();
        let bad: usize = self.metrics.iter().map(|m| m.gray_failures.len()).sum();
        (total - bad, total)
    }

    pub fn d_kaehler_origin(&self) -> (usize, usize) {
        let all: Vec<_> = self.family("realization").collect();
        (all.iter().filter(|m| m.d_kaehler_zero_at_origin).count(), all.len())
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Integer combination, coefficients in `[-9, 9]`, of products of `S²₋` and
/// `S²` basis elements.
pub fn random_theta<R: Rng>(s: &Structure, rng: &mut R) -> Tensor4 {
    let left = s2_basis(s, -1);
    let right = s2_full_basis(s.dim());
    let mut t = Tensor4::zeros(s.dim());
    for a in &left {
        for b in &right {
            let c: i64 = rng.gen_range(-9..=9);
            if c != 0 {
                t = t.add(&Tensor4::outer(a, b).scale(&Rational::from(c)));
            }
        }
    }
    t
}

/// Coordinates drawn from `{0, ±1/4, ±1/2}`.
pub fn random_point<R: Rng>(dim: usize, rng: &mut R) -> Vec<Rational> {
    const CHOICES: [(i64, i64); 5] = [(0, 1), (1, 4), (-1, 4), (1, 2), (-1, 2)];
    (0..dim)
        .map(|_| {
            let (p, q) = *CHOICES.choose(rng).unwrap();
            Rational::new(p, q)
        })
        .collect()
}

/// `Ξ + P'` with `P' = ½(P - J^*P)` for a random symmetric `P` of degree 3
/// or 4 vanishing to second order at the origin.
pub fn non_quadratic_metric<R: Rng>(s: &Structure, degree: u32, rng: &mut R) -> PolyMetric {
    let d = s.dim();
    let mut p = PolyMetric::constant(&crate::exactnum::Matrix::zeros(d, d));
    for a in 0..d {
        for b in a..d {
            let mut c = Poly::zero(d);
            for _ in 0..2 {
                let deg = rng.gen_range(2..=degree);
                let mut e = vec![0u32; d];
                for _ in 0..deg {
                    e[rng.gen_range(0..d)] += 1;
                }
                let k: i64 = rng.gen_range(-3..=3);
                c = c.add(&Poly::monomial(d, e, Rational::new(k, 2)));
            }
            // Guarantee the top degree actually occurs somewhere.
            if a == 0 && b == 0 {
                let mut e = vec![0u32; d];
                e[rng.gen_range(0..d)] = degree;
                c = c.add(&Poly::monomial(d, e, Rational::one()));
            }
            p.add_sym_product(a, b, &c);
        }
    }
    let half = Rational::new(1, 2);
    let anti = p.add(&p.pullback(s.j()).scale(&-Rational::one())).scale(&half);
    PolyMetric::constant(s.form()).add(&anti)
}

/// Checks one metric at the origin plus `points` random nonsingular points.
pub fn check_metric_suite<R: Rng>(
    m: &PolyMetric,
    s: &Structure,
    theta: Option<&Tensor4>,
    points: usize,
    rng: &mut R,
) -> Result<MetricCheck> {
    let d = s.dim();
    let origin = vec![Rational::zero(); d];
    let r0 = riemann_from_jet(&jet_at(m, &origin)?);
    let mut check = MetricCheck {
        family: if theta.is_some() { "realization" } else { "polynomial" },
        index: 0,
        origin_equals_p: match theta {
            Some(t) => Some(r0 == p_operator(t).scale(&Rational::from(2)) && {
                let half = super::p_realizing_metric(t, s)?;
                riemann_from_jet(&jet_at(&half, &origin)?) == p_operator(t)
            }),
            None => None,
        },
        d_kaehler_zero_at_origin: d_kaehler_at(m, s, &origin)?.is_zero(),
        points: 0,
        gray_failures: vec![],
        curvature_failures: vec![],
        resampled: 0,
        d_kaehler_nonzero_points: 0,
    };
    while check.points < points {
        let pt = random_point(d, rng);
        let jet = match jet_at(m, &pt) {
            Ok(j) => j,
            Err(Error::SingularAtPoint) => {
                check.resampled += 1;
                if check.resampled > 100 * points.max(1) {
                    return Err(Error::SingularAtPoint);
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        let r = riemann_from_jet(&jet);
        if let Some(idx) = first_violation(&r) {
            check.curvature_failures.push((pt.clone(), idx));
        }
        let g = gray_symmetrize(&r, s)?;
        if let Some((idx, _)) = g.nonzero_entries().first() {
            check.gray_failures.push((pt.clone(), *idx));
        }
        if !d_kaehler_at(m, s, &pt)?.is_zero() {
            check.d_kaehler_nonzero_points += 1;
        }
        check.points += 1;
    }
    Ok(check)
}

/// Realization metrics for `config.samples` random `Θ` plus
/// `config.polynomial_metrics` degree 3/4 metrics. Deterministic in the seed.
pub fn realization_suite(config: &SuiteConfig) -> Result<SuiteSummary> {
    if !matches!(config.dim, 4 | 6 | 8) {
        return Err(Error::UnsupportedDimension(config.dim));
    }
    let s = standard_para_hermitian(config.dim / 2)?;
    let realization: Vec<Result<MetricCheck>> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(config.seed, i as u64);
            let theta = random_theta(&s, &mut rng);
            let m = realization_metric(&theta, &s)?;
            let mut c = check_metric_suite(&m, &s, Some(&theta), config.points_per_metric, &mut rng)?;
            c.index = i;
            Ok(c)
        })
        .collect();
    let polynomial: Vec<Result<MetricCheck>> = (0..config.polynomial_metrics)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(config.seed, (1 << 32) + i as u64);
            let degree = if i % 2 == 0 { 3 } else { 4 };
            let m = non_quadratic_metric(&s, degree, &mut rng);
            let mut c = check_metric_suite(&m, &s, None, config.points_per_metric, &mut rng)?;
            c.index = i;
            Ok(c)
        })
        .collect();
    let metrics = realization.into_iter().chain(polynomial).collect::<Result<Vec<_>>>()?;
    Ok(SuiteSummary { config: config.clone(), metrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Kind;

    #[test]
    fn theta_is_admissible() {
        let s = standard_para_hermitian(2).unwrap();
        let mut rng = rng_for(7, 0);
        let t = random_theta(&s, &mut rng);
        assert!(realization_metric(&t, &s).is_ok());
        assert!(!t.is_zero());
    }

    #[test]
    fn non_quadratic_metrics_are_para_hermitian() {
        let s = standard_para_hermitian(2).unwrap();
        let mut rng = rng_for(3, 1);
        for deg in [3, 4] {
            let m = non_quadratic_metric(&s, deg, &mut rng);
            assert!(m.is_compatible(s.j(), Kind::ParaHermitian));
            assert_eq!(m.degree(), deg);
            assert_eq!(m.background(), *s.form());
        }
    }

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let mut cfg = SuiteConfig::new(4, 11, 3);
        cfg.points_per_metric = 3;
        cfg.polynomial_metrics = 2;
        let a = realization_suite(&cfg).unwrap();
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.origin_matches(), (3, 3));
        assert_eq!(a, realization_suite(&cfg).unwrap());
        assert_eq!(realization_suite(&SuiteConfig::new(2, 0, 1)).unwrap_err(), Error::UnsupportedDimension(2));
    }
}
