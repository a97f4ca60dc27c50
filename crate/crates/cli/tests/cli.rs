use std::fs;
use std::process::{Command, Output};

use latpoly::sweep::read_csv;
use serde_json::Value;

fn latpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latpoly"))
        .args(args)
        .env_remove("LATPOLY_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn count_reports_exact_json() {
    let v = json(&latpoly(&["count", "--polytope", "cross d=2 a=[1, 1]", "--t", "3"]));
    assert_eq!(v["count"], 25);
    assert_eq!(v["certified"], true);
    let b = json(&latpoly(&["count", "--polytope", "cross d=2 a=[1, 1/sqrt(2)]", "--t", "10", "--brute-force"]));
    let r = json(&latpoly(&["count", "--polytope", "cross d=2 a=[1, 1/sqrt(2)]", "--t", "10"]));
    assert_eq!(b["count"], r["count"]);
}

#[test]
fn poly_prints_symbolic_and_decimal_forms() {
    let v = json(&latpoly(&["poly", "--polytope", "cross d=2 a=[1, sqrt(2)]", "--digits", "12", "--t", "3"]));
    assert_eq!(v["d"], 2);
    // leading coefficient 2^d prod a / d!
    assert_eq!(v["coefficients"][2]["decimal"], "2.828427124746");
    assert_eq!(v["coefficients"][1]["decimal"], "0.000000000000");
}

#[test]
fn fourier_methods_agree() {
    let run = |m: &str| {
        json(&latpoly(&[
            "fourier", "--simplex", "general d=2 v=[[0,0],[1,0],[1/2,1]]", "--y", "2/3,-1/2", "--t", "7/5", "--method", m,
        ]))
    };
    let a = run("residues");
    for m in ["contour", "direct-oracle", "closed-form"] {
        let b = run(m);
        for part in ["re", "im"] {
            let (x, y) = (a[part].as_f64().unwrap(), b[part].as_f64().unwrap());
            assert!((x - y).abs() < 1e-9, "{m} {part}: {x} vs {y}");
        }
    }
}

#[test]
fn cesaro_emits_csv_rows() {
    let out = latpoly(&["cesaro", "--axes", "1/sqrt(2), 1/sqrt(3)", "--t", "5", "--n", "8,16"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,ces,count,e_n,gap,residual");
    assert_eq!(lines.len(), 3);
}

#[test]
fn ehrhart_and_dedekind() {
    let v = json(&latpoly(&["ehrhart", "--axes", "1,1,1"]));
    assert_eq!(v["interpolated_td_minus_2"], "11/6");
    assert_eq!(v["match"], true);
    let d = json(&latpoly(&["dedekind", "1", "3"]));
    assert_eq!(d["value"], "1/18");
    assert_eq!(latpoly(&["dedekind", "2", "4"]).status.code(), Some(2));
}

#[test]
fn dioph_writes_table_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let fit = dir.path().join("fit.json");
    let out = latpoly(&["dioph", "--alphas", "sqrt(2)", "--m-max", "5000", "--checkpoints", "8", "--fit", fit.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("m,s,l_m\n"));
    let v: Value = serde_json::from_str(&fs::read_to_string(fit).unwrap()).unwrap();
    assert!(v["gamma"]["slope"].as_f64().unwrap() > 0.5);
}

const SWEEP: &str = r#"
polytope = "cross d=2 a=[1, 1/sqrt(2)]"
precision_bits = 128

[grid]
start = "1"
stop = "60"
count = 40
spacing = "log"
"#;

#[test]
fn sweep_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let cfg = dir.path().join(format!("{name}.toml"));
        fs::write(&cfg, format!("output = {:?}\n{SWEEP}", out.to_str().unwrap())).unwrap();
        let r = latpoly(&["sweep", cfg.to_str().unwrap()]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        outputs.push(fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let recs = read_csv(outputs[0].as_slice()).unwrap();
    assert_eq!(recs.len(), 40);
    assert!(recs.iter().all(|r| r.certified));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, format!("colour = \"red\"\n{SWEEP}")).unwrap();
    assert_eq!(latpoly(&["sweep", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(latpoly(&["sweep", "/nonexistent/config.toml"]).status.code(), Some(2));
    assert_eq!(latpoly(&["report", "no-such-campaign"]).status.code(), Some(2));
    assert_eq!(latpoly(&["count", "--polytope", "cross d=1 a=[1]", "--t", "sqrt("]).status.code(), Some(2));
    let env = Command::new(env!("CARGO_BIN_EXE_latpoly"))
        .args(["poly", "--polytope", "cross d=1 a=[2]"])
        .env("LATPOLY_PRECISION_BITS", "100000")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn precision_env_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_latpoly"))
        .args(["poly", "--polytope", "cross d=1 a=[sqrt(2)]", "--digits", "40"])
        .env("LATPOLY_PRECISION_BITS", "512")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["coefficients"][1]["decimal"], "2.8284271247461900976033774484193961571393");
}

#[test]
fn report_writes_summary_and_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = latpoly(&["report", "mainterm-identities", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = fs::read_to_string(dir.path().join("mainterm-identities/summary.txt")).unwrap();
    assert!(summary.contains("C2  PASS"), "{summary}");
    assert!(dir.path().join("mainterm-identities/c2.json").exists());
}
