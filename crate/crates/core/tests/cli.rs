//! End-to-end runs of the `freeaut` binary.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn freeaut(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_freeaut"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("freeaut-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

#[test]
fn verifiers_exit_zero_and_emit_json() {
    for args in [
        vec!["verify-gersten", "--rank", "3"],
        vec!["verify-identities", "--rank", "3"],
        vec!["verify-edge-property", "--rank", "2"],
        vec!["verify-table", "--rank", "4", "--jobs", "2"],
        vec!["birman-diagram", "--rank", "3", "--prefix", "1"],
    ] {
        let (code, out, _) = freeaut(&args);
        assert_eq!(code, 0, "{args:?}\n{out}");
        assert!(out.contains("0 failures: PASS"), "{out}");
        let mut json_args = args.clone();
        json_args.push("--json");
        let (code, out, _) = freeaut(&json_args);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["failures"].as_array().unwrap().is_empty());
    }
}

#[test]
fn right_reading_of_the_table_fails() {
    let (code, out, _) = freeaut(&["verify-table", "--rank", "4", "--reading", "right"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));
}

#[test]
fn kernel_check_reports_each_condition() {
    let (code, out, _) = freeaut(&["kernel-check", "--rank", "3", "--prefix", "1", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    // four generators: one stabilizer and two quotient conditions each
    assert_eq!(v["records"].as_array().unwrap().len(), 12);

    let outside = scratch("outside.txt", "M(v1, v2)\n");
    let (code, out, _) = freeaut(&[
        "kernel-check",
        "--rank",
        "3",
        "--prefix",
        "1",
        "--aut",
        outside.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("stabilizer") && out.contains("no"));

    let text = scratch(
        "inside.txt",
        "v1 -> v1\nv2 -> v2\nv3 -> v1 v3\nv1 <- v1\nv2 <- v2\nv3 <- v1^-1 v3\n",
    );
    let (code, out, _) = freeaut(&[
        "kernel-check",
        "--rank",
        "3",
        "--prefix",
        "1",
        "--aut",
        text.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("Φ("));
}

#[test]
fn lift_matrix_round_trips() {
    let m = scratch("m.txt", "1 2 0\n0 1 0\n0 3 -1\n");
    let (code, out, _) = freeaut(&["lift-matrix", "--file", m.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("# abelianization matches: true"));
    // the printed automorphism parses back
    let body: String = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let phi = freeaut::FreeAutomorphism::parse(&body).unwrap();
    assert_eq!(
        phi.abelianize(),
        freeaut::IntMatrix::parse("1 2 0\n0 1 0\n0 3 -1\n").unwrap()
    );

    let prefixed = scratch("p.txt", "1 5 2\n0 3 1\n0 1 0\n");
    let (code, out, _) = freeaut(&[
        "lift-matrix",
        "--file",
        prefixed.to_str().unwrap(),
        "--prefix",
        "1",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("v1 -> v1\n"));

    let bad = scratch("bad.txt", "2 0\n0 1\n");
    let (code, _, err) = freeaut(&["lift-matrix", "--file", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("unimodular"));
}

#[test]
fn complete_basis_from_file() {
    let f = scratch(
        "complete.txt",
        "# v2 v1 is a primitive element\n[certificate]\nv1 -> v2 v1\nv2 -> v2\nv3 -> v3\nv1 <- v2^-1 v1\nv2 <- v2\nv3 <- v3\n[partial]\nv2 v1\n[targets]\n0 0\n1 0\n5 1\n",
    );
    let (code, out, err) = freeaut(&["complete-basis", "--file", f.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["basis"][0], "v2 v1");
    assert_eq!(v["abelianization_matches"], true);
}

#[test]
fn bn_build_and_homology() {
    let out_file = std::env::temp_dir().join(format!("freeaut-b2-{}.txt", std::process::id()));
    let (code, out, _) = freeaut(&[
        "bn-build",
        "--rank",
        "2",
        "--bound",
        "1",
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("f-vector: 8 20"));
    let body = fs::read_to_string(&out_file).unwrap();
    assert_eq!(body.lines().count(), 20);
    assert!(body.lines().any(|l| l == "(0,1) (1,0)"));

    let (code, out, _) = freeaut(&[
        "bn-homology",
        "--rank",
        "3",
        "--bound",
        "1",
        "--max-degree",
        "1",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("H0 = Z\n") && out.contains("H1 = 0\n"));
    assert!(out.contains("not a proof"));

    let (_, out, _) = freeaut(&[
        "bn-homology",
        "--rank",
        "3",
        "--bound",
        "1",
        "--max-degree",
        "0",
        "--reduced",
    ]);
    assert!(out.contains("H0 = 0"));
}

#[test]
fn word_eval_and_errors() {
    let (code, out, _) = freeaut(&["word-eval", "--rank", "2", "--expr", "W(v1, v2)^4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("v1 -> v1\nv2 -> v2\n"));

    let (code, _, err) = freeaut(&["word-eval", "--rank", "2", "--expr", "M(v1, v1)"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));

    let (code, _, _) = freeaut(&["verify-gersten"]);
    assert_eq!(code, 2);
    let (code, out, _) = freeaut(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("bn-homology"));
}
