use std::path::Path;
use std::process::Command;

use plap_cli::main_with;
use plap_core::random::{random_chain, rng, CorpusSpec};
use plap_core::{Case, Chain};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["plap".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn write_chain(dir: &Path, name: &str, chain: &Chain) -> String {
    let path = dir.join(name);
    std::fs::write(&path, chain.to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn bounds_uniform_forty() {
    let v = json(&["bounds", "--uniform", "40", "--case", "nd", "--p", "2"]);
    assert!(rel(v["sigma_p"].as_f64().unwrap(), 441.0) < 1e-14);
    assert_eq!(v["delta"].as_array().unwrap().len(), 1);
    assert!(v["certificates"].is_object());
}

#[test]
fn bounds_geometric_matches_limit_form() {
    let v = json(&["bounds", "--geometric", "1", "20", "80", "--case", "nd", "--p", "2"]);
    // (r^2 - 1) / ((r - 1)^2 (r - 1)) at r = 20.
    let expected = 399.0 / 6859.0;
    assert!(rel(v["improved"]["delta_bar1"].as_f64().unwrap(), expected) < 1e-10);
    assert!(rel(v["delta_bar"][0].as_f64().unwrap(), expected) < 1e-10);
}

#[test]
fn bounds_single_state() {
    let v = json(&["bounds", "--uniform", "0", "--case", "nd", "--p", "2"]);
    assert_eq!(v["lower"].as_f64().unwrap(), 0.25);
    assert_eq!(v["upper"].as_f64().unwrap(), 1.0);
}

#[test]
fn bounds_iterated() {
    let v = json(&["bounds", "--uniform", "10", "--case", "dn", "--p", "3", "--iters", "4"]);
    let d: Vec<f64> = v["delta"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(d.len(), 4);
    assert!(d.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
}

#[test]
fn solve_uniform_forty() {
    let v = json(&["solve", "--uniform", "40", "--case", "nd", "--p", "2"]);
    let exact = 4.0 * (std::f64::consts::PI / 166.0).sin().powi(2);
    assert!(rel(v["lambda"].as_f64().unwrap(), exact) < 1e-9);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 5);
}

#[test]
fn solve_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = CorpusSpec {
        n_min: 25,
        n_max: 25,
        ..CorpusSpec::default()
    };
    let chain = random_chain(&mut rng(11), Case::Nd, &spec).unwrap();
    let path = write_chain(dir.path(), "chain.json", &chain);
    let v = json(&["solve", "--file", &path, "--p", "3.5"]);
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["case"], "nd");
}

#[test]
fn solve_two_state_dn() {
    let v = json(&["solve", "--uniform", "1", "--case", "dn", "--p", "2"]);
    assert!(rel(v["lambda"].as_f64().unwrap(), 1.0) < 1e-12);
}

#[test]
fn sweep_single_point() {
    let (code, out, err) = run(&["sweep", "--uniform", "40", "--case", "nd", "--p", "2", "--transform", "raw"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], plap_cli::CSV_HEADER);
    assert_eq!(lines.len(), 2);
    let cells: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cells[0], 2.0);
    assert!(rel(cells[3], cells[4]) < 1e-10);
    // lambda_exact holds the optimal constant 1/lambda.
    let exact = 4.0 * (std::f64::consts::PI / 166.0).sin().powi(2);
    assert!(rel(cells[6], 1.0 / exact) < 1e-9);
    assert!(!out.contains('\r'));
}

#[test]
fn sweep_root_transform() {
    let raw = run(&["sweep", "--uniform", "5", "--p", "3", "--transform", "raw"]).1;
    let root = run(&["sweep", "--uniform", "5", "--p", "3"]).1;
    let parse = |s: &str| -> Vec<f64> {
        s.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect()
    };
    let (a, b) = (parse(&raw), parse(&root));
    assert_eq!(a[0], b[0]);
    for k in 1..7 {
        assert!(rel(a[k].powf(1.0 / 3.0), b[k]) < 1e-15);
    }
}

#[test]
fn sweep_is_reproducible_and_atomic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let (code, out, err) = run(&[
            "sweep", "--geometric", "1", "3", "12", "--case", "dn",
            "--p-grid", "1.1", "6", "17", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.is_empty());
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(text).unwrap().lines().count(), 18);

    // A bad grid point fails before anything is written.
    let c = dir.path().join("c.csv");
    let (code, _, _) = run(&[
        "sweep", "--uniform", "4", "--p-grid", "0.5", "3", "5", "--out", c.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(!c.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn verify_examples() {
    for args in [
        &["verify", "--uniform", "40", "--case", "nd", "--p", "2", "--trials", "100"][..],
        &["verify", "--geometric", "1", "20", "80", "--case", "nd", "--p", "7"][..],
        &["verify", "--uniform", "0", "--case", "nd", "--p", "2"][..],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
        assert!(out.contains("checks passed"));
        assert!(!out.contains("FAIL"));
    }
}

#[test]
fn duality_examples() {
    let v = json(&["duality", "--uniform", "10", "--case", "dn", "--p", "2"]);
    assert!(v["gap"].as_f64().unwrap() <= 1e-10);

    let dir = tempfile::tempdir().unwrap();
    let one = Chain::new(Case::Dn, vec![2.0], vec![3.0]).unwrap();
    let path = write_chain(dir.path(), "one.json", &one);
    let v = json(&["duality", "--file", &path, "--p", "3"]);
    assert!(v["gap"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["passed"], true);

    let spec = CorpusSpec {
        n_min: 30,
        n_max: 30,
        ..CorpusSpec::default()
    };
    let chain = random_chain(&mut rng(5), Case::Dn, &spec).unwrap();
    let path = write_chain(dir.path(), "random.json", &chain);
    let v = json(&["duality", "--file", &path, "--p", "1.5"]);
    assert!(v["gap"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn usage_errors() {
    // ND chain for duality.
    assert_eq!(run(&["duality", "--uniform", "5", "--case", "nd", "--p", "2"]).0, 2);
    // No chain source, two sources, bad exponent, bad case, bad flag.
    assert_eq!(run(&["bounds", "--p", "2"]).0, 2);
    assert_eq!(run(&["bounds", "--uniform", "3", "--file", "x.json", "--p", "2"]).0, 2);
    assert_eq!(run(&["bounds", "--uniform", "3", "--p", "1"]).0, 2);
    assert_eq!(run(&["bounds", "--uniform", "3", "--case", "xx", "--p", "2"]).0, 2);
    assert_eq!(run(&["solve", "--uniform", "3", "--p", "2", "--bogus"]).0, 2);
    assert_eq!(run(&["sweep", "--uniform", "3"]).0, 2);
    assert_eq!(run(&["bounds", "--geometric", "1", "-2", "3", "--p", "2"]).0, 2);
    let (code, _, err) = run(&["solve", "--file", "/nonexistent/chain.json", "--p", "2"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));

    let dir = tempfile::tempdir().unwrap();
    let path = write_chain(dir.path(), "c.json", &Chain::uniform(3, Case::Dn).unwrap());
    assert_eq!(run(&["bounds", "--file", &path, "--case", "nd", "--p", "2"]).0, 2);
    assert_eq!(run(&["bounds", "--file", &path, "--case", "dn", "--p", "2"]).0, 0);
}

#[test]
fn gnuplot_script() {
    let (code, out, _) = run(&["gnuplot", "--data", "sweep.csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("'sweep.csv'"));
    assert!(out.contains("set datafile separator ','"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_plap");
    let ok = Command::new(bin)
        .args(["bounds", "--uniform", "3", "--p", "2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(v["sigma_p"].is_number());
    let bad = Command::new(bin).args(["bounds", "--p", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
