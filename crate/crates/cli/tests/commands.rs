use std::process::{Command, Output};

fn paragray(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paragray")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn verify_main_json() {
    let out = paragray(&["verify-main", "--dim", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["suite"], "verify-main");
    assert_eq!(v["details"]["dim_curvature"], 20);
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["status"] == "pass"));
}

#[test]
fn verify_gray_same_seed_same_report() {
    let args = ["verify-gray", "--dim", "4", "--seed", "9", "--samples", "2", "--format", "json"];
    let strip = |mut v: serde_json::Value| {
        v["timing_ms"] = 0.into();
        v
    };
    let a = paragray(&args);
    let b = paragray(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip(json(&a)), strip(json(&b)));
    assert_eq!(json(&a)["seed"], 9);
}

#[test]
fn failing_catalog_entry_exits_one() {
    let out = paragray(&["catalog", "L5.2-W6"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL A has a nonzero W6 component"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(paragray(&["verify-main", "--dim", "5"]).status.code(), Some(2));
    assert_eq!(paragray(&["catalog", "no-such-label"]).status.code(), Some(2));
    assert_eq!(paragray(&["bogus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2 3 4\n").unwrap();
    let out = paragray(&["decompose", bad.to_str().unwrap(), "--dim", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 1"));
}

#[test]
fn exported_w10_curvature_decomposes_into_w10() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("w10.txt");
    let report = dir.path().join("r.json");
    let out = paragray(&["catalog", "L5.2-W10", "--tensor-out", t.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = paragray(&[
        "decompose",
        t.to_str().unwrap(),
        "--dim",
        "6",
        "--format",
        "json",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["details"]["nonzero_modules"], serde_json::json!(["W10"]));
    assert_eq!(v["details"]["ricci"]["tau"], "0/1");
}

#[test]
fn transfer_and_tables() {
    assert_eq!(paragray(&["transfer", "--dim", "2"]).status.code(), Some(0));
    let out = paragray(&["module-table", "--dim", "6", "--kind", "hermitian", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["structure"]["kind"], "hermitian");
}
