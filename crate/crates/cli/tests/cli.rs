use std::path::Path;
use std::process::Command;

use moishezon_core::models::branch_polynomial;
use moishezon_core::poly::{int, rat};
use moishezon_core::{ModelParams, UniPoly};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn moishezon(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_moishezon"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const N3: &str = r#"{"n":3,"lambdas":["1","2"],"g_hat":["1","-1","1/2"]}"#;

#[test]
fn build_surface_n4() {
    let r = moishezon(&["build-surface", "--n", "4"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("K^2 = 0"));
    assert!(r.stdout.ends_with("fail=0\n"));
}

#[test]
fn build_surface_rejects_small_n() {
    assert_eq!(moishezon(&["build-surface", "--n", "2"]).code, 2);
    assert_eq!(moishezon(&["build-surface", "--n", "-1"]).code, 2);
}

#[test]
fn build_surface_json() {
    let r = moishezon(&["build-surface", "--n", "5", "--json"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["failures"], 0);
    assert_eq!(v["K^2"], -2);
    let m = v["intersection_matrix"].as_array().unwrap();
    assert_eq!(m.len(), v["curve_order"].as_array().unwrap().len());
}

#[test]
fn emit_minitwistor_and_branch() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.json", N3);
    let mt = moishezon(&["emit-ideal", "--params", &f, "--which", "minitwistor"]);
    assert_eq!(mt.code, 0);
    let nt3 = mt
        .stdout
        .lines()
        .find(|l| l.starts_with("nt3: "))
        .expect("nt3 line");
    assert!(nt3.contains("1 * z4 * z5"), "{nt3}");
    let br = moishezon(&["emit-ideal", "--params", &f, "--which", "branch"]);
    let p = ModelParams::new(
        3,
        vec![int(1), int(2)],
        UniPoly::new(vec![int(1), int(-1), rat(1, 2)]),
    )
    .unwrap();
    assert_eq!(
        br.stdout,
        format!("branch1: {}\n", branch_polynomial(&p).to_canonical())
    );
    for which in ["minitwistor", "model-x", "fiber", "branch"] {
        let a = moishezon(&["emit-ideal", "--params", &f, "--which", which]);
        let b = moishezon(&["emit-ideal", "--params", &f, "--which", which]);
        assert_eq!(a.code, 0, "{which}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
        let j = moishezon(&["emit-ideal", "--params", &f, "--which", which, "--json"]);
        let v: Value = serde_json::from_str(&j.stdout).unwrap();
        assert!(!v["generators"].as_array().unwrap().is_empty());
    }
}

#[test]
fn emit_rejects_bad_params() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"n":3,"lambdas":["1.0","2"],"g_hat":["1"]}"#,
        r#"{"n":3,"lambdas":["2","1"],"g_hat":["1"]}"#,
        r#"{"n":3,"lambdas":["1","2"],"g_hat":["1"],"c":["1","0"]}"#,
        r#"{"n":3,"lambdas":["1","2"],"g_hat":["1","0","0","1"]}"#,
        r#"{"n":3,"lambdas":["1","2"],"g_hat":["1"],"g_linear":["1","0","0","1","1"]}"#,
        "not json",
    ];
    for (i, body) in cases.iter().enumerate() {
        let f = write(dir.path(), &format!("bad{i}.json"), body);
        let r = moishezon(&["emit-ideal", "--params", &f, "--which", "minitwistor"]);
        assert_eq!(r.code, 2, "case {i}: {}", r.stdout);
        assert!(r.stderr.starts_with("error: "));
    }
    // Complex c is valid input but has no rational model of X.
    let f = write(
        dir.path(),
        "cplx.json",
        r#"{"n":3,"lambdas":["1","2"],"g_hat":["1"],"c":["3/10","2/5"]}"#,
    );
    assert_eq!(
        moishezon(&["emit-ideal", "--params", &f, "--which", "branch"]).code,
        0
    );
    assert_eq!(
        moishezon(&["emit-ideal", "--params", &f, "--which", "model-x"]).code,
        2
    );
}

fn failing_ids(stdout: &str) -> Vec<String> {
    let v: Value = serde_json::from_str(stdout).unwrap();
    v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["pass"] == false)
        .map(|e| e["claim_id"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn verify_n3_passes() {
    let r = moishezon(&["verify", "--n", "3"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

/// The only failures are the comparisons of the replayed ledger with the
/// printed non-trivial members from the fourth blow-up on.
#[test]
fn verify_n6_fails_only_on_printed_ledger() {
    let r = moishezon(&["verify", "--n", "6", "--json"]);
    assert_eq!(r.code, 1);
    let expected: Vec<String> = (4..=6)
        .flat_map(|k| {
            [
                format!("linsys.ledger.Z{k}.nt+"),
                format!("linsys.ledger.Z{k}.nt-"),
            ]
        })
        .collect();
    assert_eq!(failing_ids(&r.stdout), expected);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["fail"], 6);
}

#[test]
fn verify_deep_degree() {
    for (n, deg) in [("3", "4"), ("4", "6")] {
        let r = moishezon(&["verify", "--n", n, "--deep", "--json"]);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        let e = v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["claim_id"] == "models.degree_by_slicing")
            .unwrap();
        assert_eq!(e["computed"], deg);
        assert_eq!(e["pass"], true);
    }
    let shallow = moishezon(&["verify", "--n", "3"]);
    assert!(!shallow.stdout.contains("degree_by_slicing"));
    let big = moishezon(&["verify", "--n", "5", "--deep"]);
    assert!(!big.stdout.contains("degree_by_slicing"));
}

#[test]
fn verify_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.json", N3);
    assert_eq!(moishezon(&["verify", "--n", "4", "--params", &f]).code, 2);
    assert_eq!(moishezon(&["verify", "--n", "2"]).code, 2);
    assert_eq!(
        moishezon(&["verify", "--n", "3", "--params", "/nonexistent.json"]).code,
        2
    );
}

#[test]
fn find_admissible_n3_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cand.json");
    let out = out.to_str().unwrap();
    let r = moishezon(&[
        "find-admissible",
        "--n",
        "3",
        "--lambdas",
        "1,2",
        "--seeds",
        "16",
        "--out",
        out,
    ]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.lines().any(|l| l.contains("genus 0")));
    let v = moishezon(&["verify", "--n", "3", "--params", out, "--json"]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    let j: Value = serde_json::from_str(&v.stdout).unwrap();
    let e = j["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["claim_id"] == "branch.genus(two routes)")
        .unwrap();
    assert_eq!(e["computed"], "0");
}

#[test]
fn find_admissible_n4_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cand.json");
    let out = out.to_str().unwrap();
    let r = moishezon(&[
        "find-admissible",
        "--n",
        "4",
        "--lambdas",
        "1",
        "2",
        "3",
        "--seeds",
        "4",
        "--out",
        out,
    ]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    let v = moishezon(&["verify", "--n", "4", "--params", out, "--json"]);
    let j: Value = serde_json::from_str(&v.stdout).unwrap();
    let e = j["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["claim_id"] == "branch.genus(two routes)")
        .unwrap();
    assert_eq!(e["computed"], "0");
    assert!(failing_ids(&v.stdout)
        .iter()
        .all(|id| id.starts_with("linsys.ledger.Z4.nt")));
}

#[test]
fn find_admissible_exhausted_and_errors() {
    assert_eq!(
        moishezon(&[
            "find-admissible",
            "--n",
            "3",
            "--lambdas",
            "1,2",
            "--seeds",
            "0"
        ])
        .code,
        3
    );
    assert_eq!(
        moishezon(&[
            "find-admissible",
            "--n",
            "3",
            "--lambdas",
            "1,2",
            "--seeds",
            "3",
            "--tol",
            "0"
        ])
        .code,
        3
    );
    assert_eq!(
        moishezon(&[
            "find-admissible",
            "--n",
            "3",
            "--lambdas",
            "1.5,2",
            "--seeds",
            "3"
        ])
        .code,
        2
    );
    assert_eq!(
        moishezon(&[
            "find-admissible",
            "--n",
            "3",
            "--lambdas",
            "1",
            "--seeds",
            "3"
        ])
        .code,
        2
    );
}

#[test]
fn find_admissible_is_deterministic() {
    let args = [
        "find-admissible",
        "--n",
        "3",
        "--lambdas=-1,-2",
        "--seeds",
        "4",
        "--json",
    ];
    let a = moishezon(&args);
    let b = moishezon(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    for c in v["candidates"].as_array().unwrap() {
        assert_eq!(c["certificate"]["genus"], 0);
    }
}
