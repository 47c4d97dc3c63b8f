use std::process::{Command, Output};

use qhyper_core::ncalg::text::{from_json, parse};

fn qhyper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhyper")).args(args).env_remove("QHYPER_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fixed_axis_expansion() {
    let o = qhyper(&["det", "--n", "2", "--m", "3", "--fixed-axis", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(parse(text.trim()).unwrap().len(), 4);
    assert!(text.starts_with("a[1,1,1].a[2,2,2] - q*"));
}

#[test]
fn normalized_latex() {
    let o = qhyper(&["--format", "latex", "det", "--n", "2", "--m", "2", "--normalized"]);
    assert_eq!(
        stdout(&o).trim(),
        "\\frac{1}{1 + q^{2}}\\left(a_{11} a_{22} - q a_{12} a_{21} - q a_{21} a_{12} + q^{2} a_{22} a_{11}\\right)"
    );
}

#[test]
fn json_output_reparses() {
    let text = qhyper(&["det", "--n", "2", "--m", "3"]);
    let json = qhyper(&["--format", "json", "det", "--n", "2", "--m", "3"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(from_json(&value).unwrap(), parse(stdout(&text).trim()).unwrap());
}

#[test]
fn small_pfaffian() {
    let o = qhyper(&["pf", "--k", "2", "--m", "1", "--blocks", "2"]);
    assert_eq!(stdout(&o).trim(), "b[1,2].b[3,4] - q*b[1,3].b[2,4] + q^2*b[1,4].b[2,3]");
    for form in ["full", "recursive"] {
        assert!(qhyper(&["pf", "--k", "1", "--m", "2", "--blocks", "2", "--form", form]).status.success());
    }
}

#[test]
fn relations_and_minors() {
    assert_eq!(stdout(&qhyper(&["relations", "--n", "2", "--m", "2"])).lines().count(), 6);
    assert_eq!(stdout(&qhyper(&["minor", "--n", "2", "--m", "2", "--sets", "1", "--sets", "2"])).trim(), "a[1,2]");
    let bad = qhyper(&["minor", "--n", "2", "--m", "2", "--sets", "1,x"]);
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(qhyper(&["verify", "re-det", "--n", "2", "--m", "3"]).status.code(), Some(0));
    assert_eq!(qhyper(&["verify", "detq-multiplicative", "--n", "2"]).status.code(), Some(0));
    let refuted = qhyper(&["verify", "uq-e-annihilates", "--cartan", "symmetric", "--mode", "exact"]);
    assert_eq!(refuted.status.code(), Some(1));
    assert_eq!(qhyper(&["verify", "re-det", "--max-dim", "4"]).status.code(), Some(2));
    assert_eq!(qhyper(&["verify", "no-such-check"]).status.code(), Some(64));
    assert_eq!(qhyper(&["det", "--n", "2"]).status.code(), Some(64));
    assert_eq!(qhyper(&["--help"]).status.code(), Some(0));
}

#[test]
fn laplace_placement_is_reported() {
    let o = qhyper(&["verify", "pf-laplace", "--k", "1", "--m", "1", "--blocks", "2", "--t", "1", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.trim() == "placement=divide"));
}

#[test]
fn split_is_an_alias() {
    let a = qhyper(&["verify", "delta-laplace", "--split", "1"]);
    let b = qhyper(&["verify", "delta-laplace", "--m", "1"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(qhyper(&["verify", "delta-laplace", "--split", "1", "--m", "2"]).status.code(), Some(64));
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["verify", "pluecker-thp1a", "--mode", "specialize"];
    let (a, b) = (qhyper(&args), qhyper(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = qhyper(&["verify", "pluecker-thp1a", "--mode", "specialize", "--seed", "11"]);
    assert!(stdout(&other).contains("seed: 11"));
}

#[test]
fn json_report() {
    let o = qhyper(&["--format", "json", "verify", "pf-laplace"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["id"], "pf-laplace");
    assert_eq!(v["verdict"]["kind"], "exact_zero");
    assert_eq!(v["seed"], 0x5eed);
}

#[test]
fn listing() {
    let text = stdout(&qhyper(&["list"]));
    assert!(text.lines().any(|l| l.starts_with("pf-equivalence ")));
    let json: serde_json::Value = serde_json::from_str(&stdout(&qhyper(&["--format", "json", "list"]))).unwrap();
    let entries = json.as_array().unwrap();
    assert_eq!(entries.len(), text.lines().count());
    assert!(entries.iter().all(|e| e["anchor"].as_str().is_some_and(|s| !s.is_empty())));
}
