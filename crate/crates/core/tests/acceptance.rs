//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! Criterion 5 has one record that cannot pass (see `KNOWN_FAILURES`); the
//! run exits nonzero only on an unexpected result.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use paragray::complexify::{check_curvature_transfer, check_structure, check_two_tensor_swaps, transfer_structure};
use paragray::curvature::{Tensor2, Tensor4};
use paragray::exactnum::Rational;
use paragray::gray::{check_main_theorem, gray_symmetrize, p_slot_sign, w7_subspace};
use paragray::model::{standard_hermitian, standard_para_hermitian, Kind};
use paragray::curvature::CurvatureSpace;
use paragray::realize::{catalog, evaluate_entry, realization_suite, SuiteConfig, SuiteSummary};
use paragray::tvdecomp::{decompose_two_tensor, module_table, two_tensor_inner, ModuleTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20080101;

/// (catalog label, record name) pairs expected to fail.
const KNOWN_FAILURES: &[(&str, &str)] = &[("L5.2-8", "A has a nonzero W6 component")];

struct Outcome {
    passed: bool,
    detail: String,
    /// Failing but expected; does not fail the run.
    expected: bool,
}

fn ok(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail, expected: false }
}

fn suites() -> (SuiteSummary, SuiteSummary) {
    let four = realization_suite(&SuiteConfig::new(4, SEED, 200)).unwrap();
    let six = realization_suite(&SuiteConfig::new(6, SEED, 50)).unwrap();
    (four, six)
}

fn criterion_1(sums: &[&SuiteSummary]) -> Outcome {
    let mut parts = vec![];
    let mut all = true;
    for s in sums {
        let (k, n) = s.origin_matches();
        all &= k == n && n >= if s.config.dim == 4 { 200 } else { 50 };
        parts.push(format!("2n={}: {k}/{n}", s.config.dim));
    }
    ok(all, format!("origin curvature 2P(theta) and P(theta) realized; {}", parts.join(", ")))
}

fn criterion_2(sums: &[&SuiteSummary]) -> Outcome {
    let mut parts = vec![];
    let mut all = true;
    for s in sums {
        let (k, n) = s.gray_points();
        let poly: Vec<_> = s.metrics.iter().filter(|m| m.family == "polynomial").collect();
        let curv_ok = s.metrics.iter().all(|m| m.curvature_failures.is_empty());
        let per_metric = s.metrics.iter().all(|m| m.points >= 20);
        all &= k == n && curv_ok && per_metric && poly.len() >= 10;
        parts.push(format!("2n={}: {k}/{n} points, {} degree 3/4 metrics", s.config.dim, poly.len()));
    }
    ok(all, format!("para-Gray identity; {}", parts.join(", ")))
}

fn criterion_3() -> Outcome {
    let mut parts = vec![];
    let mut all = true;
    for n in [2, 3, 4] {
        let s = standard_para_hermitian(n).unwrap();
        let c = check_main_theorem(&CurvatureSpace::new(&s), p_slot_sign(Kind::ParaHermitian)).unwrap();
        all &= c.passed();
        parts.push(format!("2n={}: P=W_G=W7perp dim {}, W7 dim {}", 2 * n, c.dim_p, c.dim_w7));
    }
    ok(all, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let mut parts = vec![];
    let mut all = true;
    for n in [2, 3] {
        let s = standard_para_hermitian(n).unwrap();
        let w7 = w7_subspace(&s);
        let eight = Rational::from(8);
        let good = w7
            .basis_vectors()
            .into_iter()
            .filter(|v| {
                let a = Tensor4::from_vec(s.dim(), v.clone()).unwrap();
                gray_symmetrize(&a, &s).unwrap() == a.scale(&eight)
            })
            .count();
        all &= good == w7.dim() && w7.dim() > 0;
        parts.push(format!("2n={}: {good}/{}", 2 * n, w7.dim()));
    }
    ok(all, format!("G(A) = 8A on a W7 basis; {}", parts.join(", ")))
}

fn criterion_5(tables: &BTreeMap<usize, ModuleTable>) -> Outcome {
    let mut failures = vec![];
    let mut total = 0;
    for e in catalog() {
        for r in evaluate_entry(&e, tables.get(&e.dim())).unwrap() {
            total += 1;
            if !r.passed {
                failures.push((e.label.to_string(), r.name.clone()));
            }
        }
    }
    let known: Vec<(String, String)> =
        KNOWN_FAILURES.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let passed = failures.is_empty();
    let listed: Vec<String> = failures.iter().map(|(l, n)| format!("{l}: {n}")).collect();
    let mut detail = format!("{}/{total} catalog records", total - failures.len());
    if !passed {
        detail += &format!(
            "; failing: {}. The metric's curvature lies in W10 (J*A = -A, rho = rho* = 0), \
             so no W6 component exists; L5.2-8c is the corrected witness",
            listed.join(", ")
        );
    }
    Outcome { passed, detail, expected: failures == known }
}

fn criterion_6(tables: &BTreeMap<usize, ModuleTable>) -> Outcome {
    let expected = [(4, 7, 20), (6, 9, 105), (8, 10, 336)];
    let mut parts = vec![];
    let mut all = true;
    for (dim, count, total) in expected {
        let t = &tables[&dim];
        let sum: usize = t.entries().iter().map(|e| e.dim()).sum();
        all &= t.module_count() == count && t.space().dim() == total && sum == total && t.validation().passed();
        parts.push(format!("2n={dim}: {} modules, dim {sum}/{}", t.module_count(), t.space().dim()));
    }
    ok(all, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut all = true;
    let mut count = 0;
    for n in [2, 3] {
        for s in [standard_para_hermitian(n).unwrap(), standard_hermitian(0, n).unwrap()] {
            let d = s.dim();
            for _ in 0..500 {
                let t = Tensor2::from_fn(d, |_, _| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4)));
                let dec = decompose_two_tensor(&t, &s);
                let parts = dec.named();
                let mut good = dec.sum() == t;
                for i in 0..parts.len() {
                    for j in i + 1..parts.len() {
                        good &= two_tensor_inner(parts[i].1, parts[j].1, &s).is_zero();
                    }
                }
                all &= good;
                count += 1;
            }
        }
    }
    ok(all, format!("{count} random 2-tensors at 2n = 4, 6 reassemble into orthogonal parts"))
}

fn criterion_8() -> Outcome {
    let mut parts = vec![];
    let mut all = true;
    for n in [1, 2, 3] {
        let map = transfer_structure(&standard_hermitian(0, n).unwrap()).unwrap();
        let st = check_structure(&map).passed();
        let swaps = check_two_tensor_swaps(&map).unwrap().iter().all(|r| r.passed);
        let cc = check_curvature_transfer(&map).unwrap();
        let gray = n == 1 || (cc.gray_kernel_maps_onto && cc.source_gray_dim == cc.target_gray_dim);
        all &= st && swaps && cc.passed() && gray;
        parts.push(format!("n={n}: rank {}/{}, Gray kernel {}", cc.image_rank, cc.source_dim, cc.target_gray_dim));
    }
    ok(all, parts.join("; "))
}

fn criterion_9(sums: &[&SuiteSummary]) -> Outcome {
    let mut parts = vec![];
    let mut all = true;
    for s in sums {
        let (k, n) = s.d_kaehler_origin();
        all &= k == n;
        parts.push(format!("2n={}: {k}/{n}", s.config.dim));
    }
    ok(all, format!("dOmega = 0 at the origin; {}", parts.join(", ")))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (four, six) = suites();
    let sums = [&four, &six];
    let tables: BTreeMap<usize, ModuleTable> =
        [2, 3, 4].into_iter().map(|n| (2 * n, module_table(&standard_para_hermitian(n).unwrap()).unwrap())).collect();
    let results = [
        criterion_1(&sums),
        criterion_2(&sums),
        criterion_3(),
        criterion_4(),
        criterion_5(&tables),
        criterion_6(&tables),
        criterion_7(),
        criterion_8(),
        criterion_9(&sums),
    ];
    let mut unexpected = 0;
    for (i, r) in results.iter().enumerate() {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        let note = if !r.passed && r.expected { " (known)" } else { "" };
        println!("criterion {}: {tag}{note} {}", i + 1, r.detail);
        if !r.passed && !r.expected {
            unexpected += 1;
        }
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
