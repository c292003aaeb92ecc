use std::path::PathBuf;

use herm2::cli::{run, EXIT_MATH, EXIT_MISMATCH, EXIT_OK, EXIT_PARSE};
use herm2::density::DensityReport;
use herm2::io::strip_schema;
use herm2::oracle::CountProfile;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn herm2(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("herm2").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn density_report_reparses() {
    let (code, out, _) = herm2(&["density", &data("h0_case1.json")]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["beta_L"], "3");
    let rep: DensityReport = serde_json::from_value(strip_schema(v.clone()).unwrap()).unwrap();
    assert_eq!(serde_json::to_value(&rep).unwrap(), strip_schema(v).unwrap());
}

#[test]
fn keys_come_out_sorted() {
    let (_, out, _) = herm2(&["density", &data("blocks_f4_case1.json")]);
    let keys: Vec<&str> = out.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn non_hermitian_input_is_a_parse_error() {
    let (code, _, err) = herm2(&["density", &data("not_hermitian.json")]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("(1, 2)"), "{err}");
}

#[test]
fn missing_file_is_a_parse_error() {
    let (code, _, _) = herm2(&["jordan", "/nonexistent/lattice.json"]);
    assert_eq!(code, EXIT_PARSE);
}

#[test]
fn verify_agrees_on_hyperbolic_plane() {
    let (code, out, _) = herm2(&["density", &data("h0_case1.json"), "--verify", "--max-depth", "5"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verification"]["agrees"], true);
    assert_eq!(v["verification"]["calibration_constant"], 1);
}

#[test]
fn verify_without_stabilization_is_a_mismatch() {
    let (code, out, _) = herm2(&["--text", "density", &data("h0_case1.json"), "--verify", "--max-depth", "2"]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(out.contains("MISMATCH"));
}

#[test]
fn jordan_on_diag_1_2_gives_two_blocks() {
    let (code, out, _) = herm2(&["jordan", &data("diag_1_2_case2.json")]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let blocks = v["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 2);
    assert_eq!((blocks[0]["i"].as_i64(), blocks[1]["i"].as_i64()), (Some(0), Some(2)));
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn oracle_max_depth_zero_is_a_usage_error() {
    let (code, _, err) = herm2(&["oracle", &data("h0_case1.json"), "--max-depth", "0"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("max-depth"));
}

#[test]
fn oracle_emits_profile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.json");
    let (code, out, _) =
        herm2(&["oracle", &data("diag_1_2_case2.json"), "--max-depth", "3", "--emit-profile", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, serde_json::from_str::<Value>(&out).unwrap());
    let p: CountProfile = serde_json::from_value(strip_schema(written).unwrap()).unwrap();
    assert_eq!(p.depths, vec![1, 2, 3]);
}

#[test]
fn oracle_failures_name_the_stage() {
    let (code, _, err) = herm2(&["oracle", &data("rank3_case2.json")]);
    assert_eq!(code, EXIT_MATH);
    assert!(err.contains("stage oracle"), "{err}");
    let (code, _, err) = herm2(&["oracle", &data("h0_case1.json"), "--budget", "10"]);
    assert_eq!(code, EXIT_MATH);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn density_out_file_and_precision_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) =
        herm2(&["--precision-override", "10", "density", &data("diag_1_2_case2.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["beta_L"], "4");
    let (code, _, _) = herm2(&["--precision-override", "1", "density", &data("diag_1_2_case2.json")]);
    assert_ne!(code, EXIT_OK);
}

#[test]
fn selftest_passes() {
    let (code, out, _) = herm2(&["--text", "selftest"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
}
