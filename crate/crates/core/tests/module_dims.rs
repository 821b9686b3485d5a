//! Module dimensions against closed-form counts.

use paragray::model::{standard_hermitian, standard_para_hermitian, Structure};
use paragray::tvdecomp::module_table;

fn expected(n: usize) -> Vec<(&'static str, usize)> {
    let n = n as i64;
    let w3 = n * n * (n - 1) * (n + 3) / 4;
    let w6 = n * n * (n + 1) * (n - 3) / 4;
    let w7 = n * n * (n * n - 1) / 6;
    let w10 = 2 * n * n * (n * n - 4) / 3;
    let w25 = if n == 2 { n * n - 1 } else { 2 * (n * n - 1) };
    let mut v = vec![
        ("W1+W4", 2),
        (if n == 2 { "W2" } else { "W2+W5" }, w25),
        ("W3", w3),
        ("W6", w6),
        ("W7", w7),
        ("W8", n * (n + 1)),
        ("W9", n * (n - 1)),
        ("W10", w10),
    ];
    v.retain(|(_, d)| *d > 0);
    v.into_iter().map(|(l, d)| (l, d as usize)).collect()
}

fn check(s: &Structure) {
    let n = s.n();
    let t = module_table(s).unwrap();
    let d = 2 * n;
    assert_eq!(t.space().dim(), d * d * (d * d - 1) / 12);
    let mut got: Vec<(&str, usize)> = t.entries().iter().map(|e| (e.label, e.dim())).collect();
    let mut want = expected(n);
    got.sort();
    want.sort();
    assert_eq!(got, want, "2n = {d}, {:?}", s.kind());
    assert!(t.validation().passed());
}

#[test]
fn para_dims() {
    for n in 2..=4 {
        check(&standard_para_hermitian(n).unwrap());
    }
}

#[test]
fn hermitian_dims() {
    for n in 2..=3 {
        check(&standard_hermitian(0, n).unwrap());
    }
}
