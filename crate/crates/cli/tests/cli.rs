use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_perfectoid"));
    c.env_remove("PERFECTOID_WITT_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn principal_ideal_tilts_to_zero() {
    let out = run(&[
        "tilt",
        "ideal",
        "--op",
        "flat",
        "--ideal",
        r#"{"kind":"principal","var":0,"bound":{"num":1,"kpow":0}}"#,
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"kind":"zero"}"#);
}

#[test]
fn witt_polys_p2() {
    let out = run(&["witt", "polys", "--p", "2", "--n", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["sum"][1]["text"], "X_1 + Y_1 - X_0*Y_0");
    assert_eq!(v["prod"][1]["text"], "2*X_1*Y_1 + X_0^2*Y_1 + X_1*Y_0^2");
}

#[test]
fn nilpotent_spectral_bound_is_zero() {
    let out = run(&["gauss", "spectral", "--ring", "dual", "--f", "epsilon", "--max-n", "8"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["bound"], "0");
    assert_eq!(v["attained_at"], 2);
    assert_eq!(v["entries"].as_array().unwrap().len(), 8);
}

#[test]
fn values_tsv() {
    let out = run(&["--format", "tsv", "values", "add", "1/2", "1/4"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("result\t3/4"));
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest"]);
    let b = run(&["selftest"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("10/10 criteria passed"));
}

#[test]
fn corrupted_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(&["--witt-cache-dir", dir.path().to_str().unwrap(), "witt", "polys", "--n", "3"]);
    assert!(ok.status.success());
    let path = dir.path().join("witt_p2_n3.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let bad = text.replacen(r#""coeff":"-1""#, r#""coeff":"1/2""#, 1);
    assert_ne!(bad, text);
    std::fs::write(&path, bad).unwrap();

    let out = bin()
        .env("PERFECTOID_WITT_CACHE", dir.path())
        .args(["witt", "polys", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["error"]["kind"], "witt_cache");
    assert!(v["error"]["message"].as_str().unwrap().contains("integrality assertion failed"));
}

#[test]
fn unsupported_prime() {
    let out = run(&["--p", "7", "values", "render", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"]["kind"], "unsupported");
}

#[test]
fn usage_error_exits_2() {
    let out = run(&["values", "bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn poly_ring_is_not_zariskian() {
    let z = r#"{"p":2,"terms":[]}"#;
    let one = r#"{"p":2,"terms":[{"num":0,"kpow":0,"coeff":1}]}"#;
    let out = run(&["zariski", "invert", "--ring", "poly", "--x", &format!("[{z},{one}]")]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["status"], "diverged-support");
}

#[test]
fn product_zero_divisor() {
    let z = r#"{"p":2,"terms":[]}"#;
    let one = r#"{"p":2,"terms":[{"num":0,"kpow":0,"coeff":1}]}"#;
    let out = run(&["spectra", "tdz", "--ring", "product", "--f", &format!("[{one},{z}]")]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["direct"]["verdict"], "tdz");
    assert_eq!(v["agree"], true);
}
