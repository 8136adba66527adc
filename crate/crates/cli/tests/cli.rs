use std::fs;
use std::process::Command;
use std::sync::Arc;

use bpb_cli::{
    reproduce_spaces, run, EXIT_FAILS, EXIT_GUARD, EXIT_INCONCLUSIVE, EXIT_MALFORMED, EXIT_OK, EXIT_PRECONDITION,
    EXIT_USAGE,
};
use bpb_core::monotonicity::CheckConfig;
use bpb_core::registry;

fn bpblab(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("bpblab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const SQUARE: &str = r#"{"name": "square", "dim": 2, "asserted_absolute": true, "spec": {"type": "lp", "p": "inf"}}"#;

#[test]
fn hnap_counterexample_exits_two() {
    let (code, out, _) = bpblab(&["check", "--registry", "example-hnap-3d", "--property", "hnap"]);
    assert_eq!(code, EXIT_FAILS);
    assert!(out.starts_with("# bpblab check | space example-hnap-3d | seed 0 |"));
    assert!(out.contains("[HNAp] fails-witnessed"));
    assert!(out.contains("sum = 1.25"));
}

#[test]
fn l1_um_rows_are_the_identity() {
    let (code, out, _) = bpblab(&["check", "--registry", "lp-1-3", "--property", "um"]);
    assert_eq!(code, EXIT_OK);
    for e in ["0.05", "0.1", "0.2", "0.4", "0.8"] {
        assert!(out.contains(&format!("eps = {e:<6} delta_hat = {e}\n")), "{out}");
    }
}

#[test]
fn square_file_umoe_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    fs::write(&path, SQUARE).unwrap();
    let csv = dir.path().join("out");
    let (code, out, _) = bpblab(&[
        "check",
        "--file",
        path.to_str().unwrap(),
        "--property",
        "umoe",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_FAILS);
    assert!(out.contains("witness x = (1, -1)"));
    let table = fs::read_to_string(csv.join("square.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("space,property,eps,delta_hat,witness_norm_plus,witness_norm_minus,verdict"));
    assert_eq!(lines.count(), 5);
    assert_eq!(fs::read_to_string(csv.join("square.txt")).unwrap(), out);
}

#[test]
fn output_is_deterministic() {
    let args = ["check", "--registry", "random-absolute-2d-1", "--seed", "7"];
    let (c1, a, _) = bpblab(&args);
    let (c2, b, _) = bpblab(&args);
    assert_eq!((c1, &a), (c2, &b));
    assert!(a.contains("| seed 7 |"));
}

#[test]
fn error_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name": "x", "dim": 2, "spec": {"type": "lp"}}"#).unwrap();
    assert_eq!(bpblab(&["check", "--file", bad.to_str().unwrap()]).0, EXIT_MALFORMED);
    let missing = dir.path().join("missing.json");
    assert_eq!(bpblab(&["check", "--file", missing.to_str().unwrap()]).0, EXIT_MALFORMED);
    assert_eq!(bpblab(&["check", "--registry", "lp-2-7", "--property", "wm"]).0, EXIT_GUARD);
    assert_eq!(bpblab(&["check", "--registry", "lp-2-7", "--property", "hnap"]).0, EXIT_OK);
    assert_eq!(bpblab(&["check", "--registry", "lp-2-2", "--tol", "0.5"]).0, EXIT_USAGE);
    assert_eq!(bpblab(&["check", "--registry", "lp-2-2", "--eps", "1.5"]).0, EXIT_USAGE);
    assert_eq!(bpblab(&["check"]).0, EXIT_USAGE);
    assert_eq!(bpblab(&["check", "--registry", "nowhere"]).0, EXIT_USAGE);
}

#[test]
fn strict_check_outside_the_plane_is_inconclusive() {
    let (code, out, _) = bpblab(&["check", "--registry", "lp-2-3", "--property", "strictmono"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert!(out.contains("structural answer strict"));
}

#[test]
fn bpb_variants() {
    let (code, out, _) = bpblab(&[
        "bpb", "--registry", "lp-2-3", "--variant", "positive", "--x", "20/29,21/29,0", "--f", "119/169,120/169,0",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("contract: met"));
    let (code, out, _) = bpblab(&["bpb", "--registry", "example-hnap-3d", "--variant", "sm-hnap", "--witness", "pair"]);
    assert_eq!(code, EXIT_FAILS);
    assert!(out.contains("hnap_violation = true"));
    assert!(out.contains("residual = 0.333333333333"));
    let (code, _, err) =
        bpblab(&["bpb", "--registry", "lp-2-3", "--variant", "classic", "--x", "1,0,0", "--f", "0,1,0"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("f(x) = 0 is not above 0.995"));
    let (code, _, _) = bpblab(&["bpb", "--registry", "lp-1-3", "--variant", "classic", "--x", "1,0"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn export_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = bpblab(&["export", "--registry", "example-hnap-3d", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let file = dir.path().join("example-hnap-3d.json");
    let (code, out, _) = bpblab(&["check", "--file", file.to_str().unwrap(), "--property", "hnap"]);
    assert_eq!(code, EXIT_FAILS);
    assert!(out.contains("maximum vertex-pair sum 3/2"));
    assert_eq!(bpblab(&["export"]).0, EXIT_USAGE);
}

#[test]
fn perturbed_dual_formula_is_detected() {
    let mut space = registry::example_sm3d().unwrap();
    space.expected.clear();
    let clean = reproduce_spaces(&[space.clone()], &CheckConfig::default(), None).unwrap();
    assert_eq!(clean.code, EXIT_OK, "{}", clean.text);
    let formula = space.dual_formula.clone().unwrap();
    space.dual_formula = Some(Arc::new(move |f| formula(f) + 1e-2));
    let out = reproduce_spaces(&[space], &CheckConfig::default(), None).unwrap();
    assert_eq!(out.code, EXIT_FAILS);
    assert!(out.rows.iter().any(|r| r.check == "dual formula" && !r.ok));
}

#[test]
fn binary_reports_exit_status() {
    let status = Command::new(env!("CARGO_BIN_EXE_bpblab"))
        .args(["check", "--registry", "lp-inf-2", "--property", "um"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_FAILS));
    assert!(String::from_utf8_lossy(&status.stdout).contains("[UM] fails-witnessed"));
}
