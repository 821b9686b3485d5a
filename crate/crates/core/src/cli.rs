//! Verification commands returning machine-readable reports.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::complexify::{
    check_curvature_transfer, check_structure, check_two_tensor_swaps, scalar_invariants, transfer_structure,
};
use crate::curvature::{is_algebraic_curvature, parse_tensor_file, tensor_inner_product, CurvatureSpace, Tensor2, Tensor4};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::gray::{check_main_theorem, gray_symmetrize, p_slot_sign};
use crate::model::{standard_hermitian, standard_para_hermitian, Kind, Structure};
use crate::realize::{
    catalog_entry, evaluate_entry, nijenhuis_at, realization_suite, riemann_at, PolyMatrix, SuiteConfig,
};
use crate::tvdecomp::{decompose_two_tensor, module_table, ricci, ModuleTable};

pub const DEFAULT_SEED: u64 = 20080101;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Record {
    pub fn check(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        Record {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness: if ok { None } else { Some(witness()) },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureInfo {
    pub dim: usize,
    pub kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub structure: StructureInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub records: Vec<Record>,
    pub details: Value,
    pub timing_ms: u128,
    pub version: String,
}

impl Report {
    fn new(suite: &str, dim: usize, kind: Kind) -> Self {
        Report {
            suite: suite.to_string(),
            structure: StructureInfo { dim, kind },
            seed: None,
            records: Vec::new(),
            details: Value::Null,
            timing_ms: 0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(Record::passed)
    }

    /// 0 if every record passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} (2n = {}, {})", self.suite, self.structure.dim, self.structure.kind);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed {seed}");
        }
        for r in &self.records {
            let tag = if r.passed() { "PASS" } else { "FAIL" };
            match &r.witness {
                Some(w) => {
                    let _ = writeln!(s, "  {tag} {}: {w}", r.name);
                }
                None => {
                    let _ = writeln!(s, "  {tag} {}", r.name);
                }
            }
        }
        let ok = self.records.iter().filter(|r| r.passed()).count();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{verdict} {ok}/{} in {} ms", self.records.len(), self.timing_ms);
        s
    }

    /// Errors that should map to exit code 2.
    pub fn is_usage_error(e: &Error) -> bool {
        !matches!(e, Error::DegenerateRestriction(_) | Error::ImaginaryResidue(_) | Error::SingularAtPoint)
    }
}

fn require_dim(dim: usize) -> Result<usize> {
    if matches!(dim, 4 | 6 | 8) {
        Ok(dim / 2)
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// The standard structure of the given kind (positive definite in the
/// Hermitian case).
pub fn standard_structure(dim: usize, kind: Kind) -> Result<Structure> {
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::UnsupportedDimension(dim));
    }
    match kind {
        Kind::ParaHermitian => standard_para_hermitian(dim / 2),
        Kind::Hermitian => standard_hermitian(0, dim / 2),
    }
}

fn pq(r: &Rational) -> Value {
    Value::String(r.to_pq_string())
}

/// Nonzero entries of a 2-tensor as `[i, j, "p/q"]` with 1-based indices.
fn tensor2_json(t: &Tensor2) -> Value {
    let d = t.dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let v = t.get(i, j);
            if !v.is_zero() {
                out.push(json!([i + 1, j + 1, v.to_pq_string()]));
            }
        }
    }
    Value::Array(out)
}

/// Entries `A(a,b,c,d)` with `a < b`, `c < d`, `(a,b) <= (c,d)`, 1-based.
fn tensor4_json(t: &Tensor4) -> Value {
    let out: Vec<Value> = t
        .nonzero_entries()
        .into_iter()
        .filter(|([a, b, c, d], _)| a < b && c < d && (a, b) <= (c, d))
        .map(|([a, b, c, d], v)| json!([a + 1, b + 1, c + 1, d + 1, v.to_pq_string()]))
        .collect();
    Value::Array(out)
}

fn ricci_json(a: &Tensor4, s: &Structure) -> Result<Value> {
    let r = ricci(a, s)?;
    Ok(json!({
        "rho": tensor2_json(&r.rho),
        "rho_star": tensor2_json(&r.rho_star),
        "tau": pq(&r.tau),
        "tau_star": pq(&r.tau_star),
    }))
}

/// Realization and Gray-identity suites on random metrics.
pub fn cmd_verify_gray(dim: usize, seed: u64, samples: usize) -> Result<Report> {
    let start = Instant::now();
    require_dim(dim)?;
    let config = SuiteConfig::new(dim, seed, samples);
    let summary = realization_suite(&config)?;
    let mut rep = Report::new("verify-gray", dim, Kind::ParaHermitian);
    rep.seed = Some(seed);

    let (ok, total) = summary.origin_matches();
    let first_bad = summary.metrics.iter().find(|m| m.origin_equals_p == Some(false));
    rep.records.push(Record::check(
        format!("origin curvature of realization metrics = 2P(theta), P(theta) realized ({ok}/{total})"),
        ok == total,
        || format!("sample {}", first_bad.map_or(0, |m| m.index)),
    ));
    let (ok, total) = summary.d_kaehler_origin();
    rep.records.push(Record::check(format!("dOmega = 0 at origin ({ok}/{total})"), ok == total, || {
        "dOmega nonzero".into()
    }));
    for family in ["realization", "polynomial"] {
        let ms: Vec<_> = summary.metrics.iter().filter(|m| m.family == family).collect();
        let points: usize = ms.iter().map(|m| m.points).sum();
        let gray_bad = ms.iter().find_map(|m| m.gray_failures.first().map(|f| (m.index, f)));
        let curv_bad = ms.iter().find_map(|m| m.curvature_failures.first().map(|f| (m.index, f)));
        let bad_gray: usize = ms.iter().map(|m| m.gray_failures.len()).sum();
        let bad_curv: usize = ms.iter().map(|m| m.curvature_failures.len()).sum();
        rep.records.push(Record::check(
            format!("curvature symmetries, {family} metrics ({}/{points} points)", points - bad_curv),
            bad_curv == 0,
            || {
                let (i, (pt, idx)) = curv_bad.unwrap();
                format!("metric {i} at {} index {:?}", point_str(pt), one_based(idx))
            },
        ));
        rep.records.push(Record::check(
            format!("para-Gray identity, {family} metrics ({}/{points} points)", points - bad_gray),
            bad_gray == 0,
            || {
                let (i, (pt, idx)) = gray_bad.unwrap();
                format!("metric {i} at {} index {:?}", point_str(pt), one_based(idx))
            },
        ));
    }
    let s = standard_para_hermitian(dim / 2)?;
    let n = nijenhuis_at(&PolyMatrix::constant(s.j()), Kind::ParaHermitian, &vec![Rational::zero(); dim])?;
    rep.records.push(Record::check("coordinate para-structure is integrable", n.is_zero(), || "N != 0".into()));

    let dk: usize = summary.metrics.iter().map(|m| m.d_kaehler_nonzero_points).sum();
    let pts: usize = summary.metrics.iter().map(|m| m.points).sum();
    rep.details = json!({
        "config": summary.config,
        "resampled_points": summary.metrics.iter().map(|m| m.resampled).sum::<usize>(),
        "d_omega_nonzero_off_origin": format!("{dk}/{pts}"),
    });
    rep.timing_ms = start.elapsed().as_millis();
    Ok(rep)
}

fn point_str(pt: &[Rational]) -> String {
    let parts: Vec<String> = pt.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn one_based(idx: &[usize; 4]) -> [usize; 4] {
    idx.map(|i| i + 1)
}

/// `P = W_G = W7⊥` and `W_G ∩ W7 = 0`.
pub fn cmd_verify_main(dim: usize) -> Result<Report> {
    let start = Instant::now();
    require_dim(dim)?;
    let s = standard_para_hermitian(dim / 2)?;
    let cs = CurvatureSpace::new(&s);
    let c = check_main_theorem(&cs, p_slot_sign(Kind::ParaHermitian))?;
    let mut rep = Report::new("verify-main", dim, Kind::ParaHermitian);
    let dims = format!("dim P = {}, dim W_G = {}, dim W7 = {}, dim A = {}", c.dim_p, c.dim_gray_kernel, c.dim_w7, c.dim_curvature);
    rep.records.push(Record::check("P contained in W_G", c.p_in_gray_kernel, || dims.clone()));
    rep.records.push(Record::check("W_G meets W7 trivially", c.gray_kernel_meets_w7_trivially, || dims.clone()));
    rep.records.push(Record::check("W_G = W7 perp", c.gray_kernel_is_w7_perp, || dims.clone()));
    rep.records.push(Record::check("P = W_G", c.p_equals_gray_kernel, || dims.clone()));
    rep.records.push(Record::check(
        "dim P + dim W7 = dim A",
        c.dim_p + c.dim_w7 == c.dim_curvature,
        || dims.clone(),
    ));
    rep.details = json!({
        "dim_curvature": c.dim_curvature,
        "dim_p": c.dim_p,
        "dim_gray_kernel": c.dim_gray_kernel,
        "dim_w7": c.dim_w7,
    });
    rep.timing_ms = start.elapsed().as_millis();
    Ok(rep)
}

/// Curvature at the origin of a catalog metric with its structure.
pub fn catalog_curvature(label: &str) -> Result<(Structure, Tensor4)> {
    let e = catalog_entry(label)?;
    let a = riemann_at(&e.metric, &vec![Rational::zero(); e.dim()])?;
    Ok((e.structure, a))
}

pub fn cmd_catalog(label: &str) -> Result<Report> {
    let start = Instant::now();
    let e = catalog_entry(label)?;
    let mut rep = Report::new(&format!("catalog {}", e.label), e.dim(), Kind::ParaHermitian);
    for r in evaluate_entry(&e, None)? {
        rep.records.push(Record {
            name: r.name,
            status: if r.passed { Status::Pass } else { Status::Fail },
            witness: r.witness,
        });
    }
    let a = riemann_at(&e.metric, &vec![Rational::zero(); e.dim()])?;
    let params: serde_json::Map<String, Value> = e.params.iter().map(|(k, v)| (k.to_string(), pq(v))).collect();
    rep.details = json!({
        "label": e.label,
        "aliases": e.aliases,
        "assertion": e.assertion,
        "params": params,
        "metric": e.metric.to_json(),
        "curvature": tensor4_json(&a),
        "ricci": ricci_json(&a, &e.structure)?,
    });
    rep.timing_ms = start.elapsed().as_millis();
    Ok(rep)
}

fn components_json(a: &Tensor4, table: &ModuleTable) -> Result<(Value, Tensor4)> {
    let s = table.space().structure();
    let mut comps = serde_json::Map::new();
    let mut sum = Tensor4::zeros(a.dim());
    for (label, c) in table.components(a)? {
        sum = sum.add(&c);
        comps.insert(
            label.to_string(),
            json!({
                "dim": table.entry(label)?.dim(),
                "zero": c.is_zero(),
                "norm": pq(&tensor_inner_product(&c, &c, s)?),
                "entries": tensor4_json(&c),
            }),
        );
    }
    Ok((Value::Object(comps), sum))
}

/// Splits a tensor read from `text` into the modules of the table.
pub fn cmd_decompose(text: &str, dim: usize, kind: Kind) -> Result<Report> {
    let start = Instant::now();
    require_dim(dim)?;
    let a = parse_tensor_file(text, dim)?;
    if !is_algebraic_curvature(&a) {
        return Err(Error::NotCurvatureTensor);
    }
    let s = standard_structure(dim, kind)?;
    let table = module_table(&s)?;
    let mut rep = Report::new("decompose", dim, kind);
    let (comps, sum) = components_json(&a, &table)?;
    rep.records.push(Record::check("components reassemble the tensor", sum == a, || "sum differs".into()));
    rep.records.push(Record::check("module table validation", table.validation().passed(), || {
        format!("{:?}", table.validation())
    }));
    let nonzero: Vec<&str> =
        table.components(&a)?.into_iter().filter(|(_, c)| !c.is_zero()).map(|(l, _)| l).collect();
    let gray = gray_symmetrize(&a, &s)?.is_zero();
    rep.details = json!({
        "components": comps,
        "nonzero_modules": nonzero,
        "ricci": ricci_json(&a, &s)?,
        "gray_identity": gray,
    });
    rep.timing_ms = start.elapsed().as_millis();
    Ok(rep)
}

/// Transfer round trip from the positive definite Hermitian model.
pub fn cmd_transfer(dim: usize) -> Result<Report> {
    let start = Instant::now();
    if !matches!(dim, 2 | 4 | 6) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let n = dim / 2;
    let map = transfer_structure(&standard_hermitian(0, n)?)?;
    let mut rep = Report::new("transfer", dim, Kind::Hermitian);
    let sc = check_structure(&map);
    rep.records.push(Record::check("target structure is para-Hermitian of signature (n,n)", sc.passed(), || {
        format!("{sc:?}")
    }));
    let swaps = check_two_tensor_swaps(&map)?;
    for r in &swaps {
        rep.records.push(Record::check(format!("{} -> {}", r.source_label, r.target_label), r.passed, || {
            format!("rank {} of {}, target dim {}", r.image_rank, r.dim, r.target_dim)
        }));
    }
    let cc = check_curvature_transfer(&map)?;
    rep.records.push(Record::check(
        format!("curvature transfer is bijective (rank {} of {})", cc.image_rank, cc.source_dim),
        cc.image_rank == cc.source_dim && cc.source_dim == cc.target_dim && cc.images_are_curvature,
        || format!("{cc:?}"),
    ));
    rep.records.push(Record::check(
        format!("Gray kernel transfers onto para-Gray kernel (dim {})", cc.source_gray_dim),
        cc.gray_kernel_maps_onto && cc.source_gray_dim == cc.target_gray_dim,
        || format!("source {}, target {}", cc.source_gray_dim, cc.target_gray_dim),
    ));
    let cs = CurvatureSpace::new(map.source());
    let coords: Vec<Rational> = (0..cs.dim()).map(|i| Rational::from((i as i64 * 7) % 5 - 2)).collect();
    let [src, tgt] = scalar_invariants(&cs.lift(&coords), &map)?;
    rep.records.push(Record::check("tau and tau* preserved", src == tgt, || {
        format!("source ({}, {}), target ({}, {})", src.0, src.1, tgt.0, tgt.1)
    }));
    rep.details = json!({ "structure": sc, "swaps": swaps, "curvature": cc });
    rep.timing_ms = start.elapsed().as_millis();
    Ok(rep)
}

pub fn cmd_module_table(dim: usize, kind: Kind) -> Result<Report> {
    let start = Instant::now();
    require_dim(dim)?;
    let s = standard_structure(dim, kind)?;
    let table = module_table(&s)?;
    let v = table.validation();
    let mut rep = Report::new("module-table", dim, kind);
    let total = table.space().dim();
    let expected_count = match dim {
        4 => 7,
        6 => 9,
        _ => 10,
    };
    rep.records.push(Record::check(
        format!("{} modules", table.module_count()),
        table.module_count() == expected_count,
        || format!("expected {expected_count}"),
    ));
    rep.records.push(Record::check("pairwise orthogonal", v.pairwise_orthogonal, || "not orthogonal".into()));
    rep.records.push(Record::check(format!("dimensions sum to {total}"), v.dims_sum_to_total, || {
        let dims: Vec<String> = table.entries().iter().map(|e| format!("{}={}", e.label, e.dim())).collect();
        dims.join(", ")
    }));
    rep.records.push(Record::check("nondegenerate restrictions", v.degenerate.is_empty(), || v.degenerate.join(", ")));
    rep.records.push(Record::check("each block is the complement of the others", v.not_complement.is_empty(), || {
        v.not_complement.join(", ")
    }));
    for iso in &v.iso {
        rep.records.push(Record::check(format!("{} via {}", iso.label, iso.map), iso.bijective(), || {
            format!("rank {}, block {}, target {}", iso.rank, iso.block_dim, iso.target_dim)
        }));
    }
    rep.records.push(Record::check("Gray kernel = sum of all but W7", v.gray_kernel_is_sum_without_w7, || {
        "mismatch".into()
    }));
    let dims: serde_json::Map<String, Value> =
        table.entries().iter().map(|e| (e.label.to_string(), json!(e.dim()))).collect();
    rep.details = json!({ "dim_curvature": total, "modules": dims });
    rep.timing_ms = start.elapsed().as_millis();
    Ok(rep)
}

/// Decomposes a 2-tensor; exposed for the text summary of `decompose`.
pub fn two_tensor_parts_json(t: &Tensor2, s: &Structure) -> Value {
    let d = decompose_two_tensor(t, s);
    let parts: serde_json::Map<String, Value> =
        d.named().into_iter().map(|(k, v)| (k.to_string(), tensor2_json(v))).collect();
    Value::Object(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::write_tensor_file;

    #[test]
    fn verify_main_small() {
        let r = cmd_verify_main(4).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.details["dim_p"], json!(18));
        assert_eq!(cmd_verify_main(2).unwrap_err(), Error::UnsupportedDimension(2));
    }

    #[test]
    fn verify_gray_is_deterministic() {
        let a = cmd_verify_gray(4, 5, 2).unwrap();
        let mut b = cmd_verify_gray(4, 5, 2).unwrap();
        assert!(a.passed(), "{}", a.to_text());
        b.timing_ms = a.timing_ms;
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn catalog_reports() {
        let r = cmd_catalog("L5.2-W3").unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(cmd_catalog("nope").unwrap_err(), Error::UnknownLabel("nope".into()));
    }

    #[test]
    fn decompose_zero_and_errors() {
        let r = cmd_decompose("# empty\n", 4, Kind::ParaHermitian).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["nonzero_modules"], json!([]));
        let bad = cmd_decompose("1 2 3\n", 4, Kind::ParaHermitian).unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 1, .. }));
        let mut t = Tensor4::zeros(4);
        t.set([0, 1, 0, 1], Rational::one());
        let e = cmd_decompose(&write_tensor_file(&t), 4, Kind::ParaHermitian).unwrap_err();
        assert_eq!(e, Error::NotCurvatureTensor);
    }

    #[test]
    fn text_summary_lists_records() {
        let r = cmd_module_table(4, Kind::ParaHermitian).unwrap();
        let text = r.to_text();
        assert!(text.contains("PASS 7 modules"));
        assert!(text.lines().last().unwrap().starts_with("PASS"));
    }
}
