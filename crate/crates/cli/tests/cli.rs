use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tandem-sdt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn text_value(report: &str, label: &str) -> f64 {
    let line = report
        .lines()
        .find(|l| l.starts_with(label) && l[label.len()..].starts_with(' '))
        .unwrap_or_else(|| panic!("no line `{label}` in\n{report}"));
    line[label.len()..].trim().parse().unwrap()
}

const FIG1: &[&str] = &["--d-h", "1", "--d-a", "1", "--c-a", "-0.3", "--payoff-ratio", "0.5"];

#[test]
fn analyze_worked_example_text() {
    let out = run(&[&["analyze"], FIG1].concat());
    assert!(out.status.success());
    let text = stdout(&out);
    let round3 = |v: f64| (v * 1000.0).round() / 1000.0;
    assert_eq!(round3(text_value(&text, "unaided criterion")), -0.693);
    assert_eq!(round3(text_value(&text, "criterion after alert")), -1.321);
    assert_eq!(round3(text_value(&text, "criterion after no alert")), 0.313);
    assert!(!text.contains("uninformative"));
}

#[test]
fn analyze_worked_example_json() {
    let out = run(&[&["analyze", "--format", "json"], FIG1].concat());
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["unaided"]["criterion"].as_f64().unwrap() + 0.693).abs() < 5e-4);
    assert!((v["contingent"]["criterion_alert"].as_f64().unwrap() + 1.321).abs() < 5e-4);
    assert!((v["contingent"]["criterion_no_alert"].as_f64().unwrap() - 0.313).abs() < 5e-4);
    assert!(v["note"].is_null());
    let d_eff = v["tandem"]["d_eff"].as_f64().unwrap();
    assert!(d_eff > 1.0 && d_eff < 2f64.sqrt());
}

#[test]
fn payoff_quadruple_wins_over_ratio() {
    // U = (j_fp - j_tn)/(j_fn - j_tp) = (-1 - 0)/(-2 - 0) = 0.5
    let quad = run(&[
        "analyze",
        "--d-h",
        "1",
        "--d-a",
        "1",
        "--c-a",
        "-0.3",
        "--payoffs",
        "0,-1,0,-2",
        "--payoff-ratio",
        "3",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&quad.stdout).unwrap();
    assert!((v["unaided"]["ln_beta"].as_f64().unwrap() - 0.5f64.ln()).abs() < 1e-12);
}

#[test]
fn uninformative_aid_is_flagged() {
    let out = run(&["analyze", "--d-h", "1", "--d-a", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("aid uninformative; tandem equals human alone"));
    let json = run(&["analyze", "--d-h", "1", "--d-a", "0", "--format", "json"]);
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["note"], "aid uninformative; tandem equals human alone");
    assert!((v["tandem"]["d_eff"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_two_without_output() {
    for args in [
        vec!["analyze", "--d-h", "1"],
        vec!["simulate", "--d-h", "1", "--d-a", "1", "--n-trials", "0"],
        vec!["analyze", "--d-h", "1", "--d-a", "1", "--p-signal", "1.5"],
        vec!["analyze", "--d-h", "1", "--d-a", "1", "--payoffs", "1,2,3"],
        vec!["roc", "--d-h", "1", "--format", "text"],
        vec!["trust", "--d-h", "1", "--d-a", "1", "--ratios", "0,1"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_one() {
    let out = run(&["analyze", "--d-h", "0", "--d-a", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn surface_rows_and_bound() {
    let out = run(&["surface"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(
        header,
        ["d_h", "d_a", "c_a_star", "d_eff_star", "approx_d_eff", "bound"]
    );
    assert_eq!(rows.len(), 144);
    let one_one = rows.iter().find(|r| r[0] == 1.0 && r[1] == 1.0).unwrap();
    assert!((one_one[3] - 1.30).abs() <= 0.02);
    assert!((one_one[4] - 1.3038).abs() < 1e-4);
    assert!((one_one[5] - std::f64::consts::SQRT_2).abs() < 1e-12);
    for r in &rows {
        assert!(r[3] <= r[5], "{r:?}");
    }

    let single = run(&["surface", "--d-h-grid", "1", "--d-a-grid", "2"]);
    let (_, rows) = csv_rows(&stdout(&single));
    assert_eq!(rows.len(), 1);
    assert!((rows[0][3] - 2.06).abs() <= 0.03);
}

#[test]
fn trust_curve_shape() {
    let out = run(&["trust", "--d-h", "1", "--d-a", "1"]);
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["ratio", "d_eff", "d_eff_over_d_h"]);
    assert_eq!(rows.len(), 81);
    let best = rows.iter().max_by(|a, b| a[2].total_cmp(&b[2])).unwrap();
    assert!((best[0] - 1.0).abs() < 1e-9);
    assert!((rows[0][0] - 0.01).abs() < 1e-15 && (rows[80][0] - 100.0).abs() < 1e-9);

    let over = run(&["trust", "--d-h", "1", "--d-a", "0.5", "--ratios", "100"]);
    let (_, rows) = csv_rows(&stdout(&over));
    assert!((rows[0][2] - 0.5).abs() < 1e-3);

    // Human-alone limit; the residual benefit at 0.01 is a few hundredths.
    let under = run(&["trust", "--d-h", "1", "--d-a", "3", "--ratios", "0.01"]);
    let (_, rows) = csv_rows(&stdout(&under));
    assert!((rows[0][2] - 1.0).abs() < 0.05);
}

#[test]
fn fit_alpha_default_and_single_pair() {
    let out = run(&["fit-alpha"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let alpha = v["alpha"].as_f64().unwrap();
    assert!((0.28..=0.33).contains(&alpha), "{alpha}");
    assert!(v["correlation"].as_f64().unwrap() >= 0.99);
    assert!(v["variance_explained"].as_f64().unwrap() >= 0.99);
    assert_eq!(v["points"].as_array().unwrap().len(), 144);

    let single = run(&["fit-alpha", "--d-h-grid", "1", "--d-a-grid", "1"]);
    let v: Value = serde_json::from_slice(&single.stdout).unwrap();
    assert!(v["points"][0]["residual"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn roc_rows() {
    let out = run(&["roc", "--d-h", "1"]);
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["criterion", "p_fp", "p_tp"]);
    for r in &rows {
        let d = tandem_sdt::std_normal_quantile_of(r[2]).unwrap() - tandem_sdt::std_normal_quantile_of(r[1]).unwrap();
        assert!((d - 1.0).abs() < 1e-9, "{r:?}");
    }
    let at = |c: f64| rows.iter().position(|r| (r[0] - c).abs() < 1e-9).unwrap();
    let (lo, hi) = (&rows[at(1.0) - 1], &rows[at(1.0) + 1]);
    let slope = (hi[2] - lo[2]) / (hi[1] - lo[1]);
    assert!((slope - std::f64::consts::E).abs() < 0.01, "{slope}");

    let diag = run(&["roc", "--d-h", "0"]);
    let (_, rows) = csv_rows(&stdout(&diag));
    for r in &rows {
        assert_eq!(r[1], r[2]);
    }
}

#[test]
fn simulate_passes_and_is_reproducible() {
    let args = [&["simulate", "--n-trials", "1000000", "--seed", "42"], FIG1].concat();
    let first = run(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(v["manifest"]["seed"], 42);
    assert_eq!(v["simulation"]["n_trials"], 1_000_000);
}

#[test]
fn out_writes_data_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.csv");
    let out = run(&[
        "surface",
        "--d-h-grid",
        "1,2",
        "--d-a-grid",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let data = std::fs::read(&path).unwrap();
    let manifest: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("surface.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "surface");
    assert_eq!(manifest["parameters"]["d_h_grid"], serde_json::json!([1.0, 2.0]));
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["seed"].is_null());

    use sha2::Digest;
    let digest = hex::encode(sha2::Sha256::digest(&data));
    assert_eq!(manifest["output_sha256"], digest);

    // Regenerating from the manifest parameters gives the same bytes.
    let again = run(&["surface", "--d-h-grid", "1,2", "--d-a-grid", "1"]);
    assert_eq!(again.stdout, data);
}

#[test]
fn json_outputs_are_single_objects() {
    for args in [
        vec!["surface", "--d-h-grid", "1", "--d-a-grid", "1", "--format", "json"],
        vec!["trust", "--d-h", "1", "--d-a", "1", "--ratios", "1", "--format", "json"],
        vec!["roc", "--d-h", "1", "--c-min", "0", "--c-max", "0", "--format", "json"],
    ] {
        let out = run(&args);
        assert!(out.status.success(), "{args:?}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v.is_object(), "{args:?}");
    }
}
