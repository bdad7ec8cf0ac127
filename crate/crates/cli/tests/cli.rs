use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn secant(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secant"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_run(cache: &Path, args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = secant(cache, &all);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| panic!("{e}: {stdout:?}"));
    (out.status.code().unwrap(), v)
}

#[test]
fn check_reports_known_deficit() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(dir.path(), &["check", "-k", "2", "-n", "6", "-s", "3"]);
    assert_eq!(code, 0);
    let rec = &v["payload"]["records"][0];
    assert_eq!(rec["achieved"], 34);
    assert_eq!(rec["verdict"]["InconclusiveDeficit"], 1);
}

#[test]
fn check_fills_for_lines_and_planes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(dir.path(), &["check", "-k", "1", "-n", "5", "-s", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["records"][0]["verdict"], "CertifiedFills");
    let (code, v) = json_run(
        dir.path(),
        &[
            "check",
            "-k",
            "2",
            "-n",
            "9",
            "-s",
            "6",
            "--second-prime",
            "46337",
        ],
    );
    assert_eq!(code, 0);
    let recs = v["payload"]["records"].as_array().unwrap();
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["verdict"] == "CertifiedFills"));
}

#[test]
fn payload_is_deterministic_and_cache_replays() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["check", "-k", "2", "-n", "8", "-s", "4", "--seed", "7"];
    let (_, first) = json_run(dir.path(), &args);
    assert_eq!(first["cached"], false);
    let (_, second) = json_run(dir.path(), &args);
    assert_eq!(second["cached"], true);
    assert_eq!(second["elapsed_ms"], first["elapsed_ms"]);
    let mut fresh_args = args.to_vec();
    fresh_args.push("--no-cache");
    let (_, fresh) = json_run(dir.path(), &fresh_args);
    assert_eq!(fresh["cached"], false);
    for v in [&second, &fresh] {
        assert_eq!(
            serde_json::to_string(&v["payload"]).unwrap(),
            serde_json::to_string(&first["payload"]).unwrap()
        );
        assert_eq!(v["key"], first["key"]);
    }
    // a different seed is a different key
    let (_, other) = json_run(
        dir.path(),
        &["check", "-k", "2", "-n", "8", "-s", "4", "--seed", "8"],
    );
    assert_ne!(other["key"], first["key"]);
    let lines = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 2);
}

#[test]
fn classify_fano_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fano.tensor");
    std::fs::write(
        &file,
        "# lines of the Fano plane\ndim 7 degree 3 one_based\n1 3 5 : 1\n1 4 7 : 1\n1 2 6 : 1\n2 3 4 : 1\n5 6 7 : 1\n",
    )
    .unwrap();
    let (code, v) = json_run(dir.path(), &["classify", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["payload"];
    assert_eq!(r["rank"], 21);
    assert_eq!(r["in_sigma3"], false);
    assert_eq!(r["p7_exact"], "-1");
}

#[test]
fn classify_bad_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.tensor");
    std::fs::write(&file, "dim 7 degree 3\n1 2 : 1\n").unwrap();
    assert_eq!(
        secant(dir.path(), &["classify", file.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.tensor");
    assert_eq!(
        secant(dir.path(), &["classify", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let file = dir.path().join("wrong_dim.tensor");
    std::fs::write(&file, "dim 6 degree 3\n0 1 2 : 1\n").unwrap();
    assert_eq!(
        secant(dir.path(), &["classify", file.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // usage errors
    assert_eq!(
        secant(d, &["check", "-k", "2", "-n", "2", "-s", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(secant(d, &["check", "-k", "2"]).status.code(), Some(2));
    assert_eq!(
        secant(
            d,
            &["--prime", "33", "check", "-k", "2", "-n", "6", "-s", "2"]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        secant(
            d,
            &["--trials", "0", "check", "-k", "2", "-n", "6", "-s", "2"]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        secant(
            d,
            &[
                "--strategy",
                "clever",
                "check",
                "-k",
                "2",
                "-n",
                "6",
                "-s",
                "2"
            ]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(secant(d, &["demo", "gr99"]).status.code(), Some(2));
    assert_eq!(
        secant(d, &["scan", "-k", "3", "--n-from", "9", "--n-to", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        secant(d, &["codes", "-n", "3", "-w", "4"]).status.code(),
        Some(2)
    );
    // a failed assertion: the defective case scanned as if it were not
    let out = secant(
        d,
        &[
            "scan", "-k", "2", "--n-from", "6", "--n-to", "6", "--s-from", "3", "--s-to", "3",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    // monomial strategy without a code is a usage error
    let out = secant(
        d,
        &[
            "--strategy",
            "monomial",
            "check",
            "-k",
            "3",
            "-n",
            "9",
            "-s",
            "6",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conjecture_table_matches_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = secant(dir.path(), &["conjecture-table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("MISMATCH"), "{text}");
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn scan_small_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(
        dir.path(),
        &["scan", "-k", "2", "--n-from", "9", "--n-to", "11"],
    );
    assert_eq!(code, 0);
    assert!(v["payload"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"] == true));
    let (code, v) = json_run(
        dir.path(),
        &[
            "scan", "-k", "3", "--n-from", "9", "--n-to", "9", "--s-from", "6", "--s-to", "6",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(
        v["payload"]["rows"][0]["record"]["verdict"],
        "CertifiedExpected"
    );
    assert_eq!(v["payload"]["rows"][0]["record"]["achieved"], 150);
}

#[test]
fn demos_and_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(dir.path(), &["demo", "gr28"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["affine_rank"], 74);
    let (code, v) = json_run(dir.path(), &["demo", "gr37"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["affine_rank"], 50);
    let (code, _) = json_run(dir.path(), &["demo", "figure1"]);
    assert_eq!(code, 0);
    let (code, v) = json_run(dir.path(), &["invariant", "1", "1", "1", "1", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["det"], "-2");
    let (code, v) = json_run(dir.path(), &["invariant", "-3", "2", "1", "-1", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["equal"], true);
}

#[test]
fn codes_command() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(dir.path(), &["codes", "-n", "10", "-w", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["words"].as_array().unwrap().len(), 5);
    assert_eq!(v["payload"]["certified_points"], 5);
}

#[test]
fn induction_small() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json_run(dir.path(), &["induction", "--n-max", "20"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["conclusion"], serde_json::json!([9, 20]));
    assert_eq!(
        secant(dir.path(), &["induction", "--n-max", "10"])
            .status
            .code(),
        Some(2)
    );
}
