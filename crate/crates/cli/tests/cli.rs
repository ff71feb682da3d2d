use std::path::PathBuf;
use std::process::{Command, Output};

use pexp_core::problem::parse_problem_str;
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn pexp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pexp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pexp-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn decimal(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn pipeline_on_tau38_finds_three() {
    let out = pexp(&["pipeline", "--problem", &fixture("tau38.expf")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let cert = &r["output"];
    assert_eq!(cert["verdict"], "finite");
    let sols = cert["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["vector"], serde_json::json!([3]));
    assert_eq!(sols[0]["status"], "exactly_verified");
}

#[test]
fn pipeline_output_is_deterministic() {
    let a = pexp(&["pipeline", "--problem", &fixture("two_pi_i_root_matching.expf")]);
    let b = pexp(&["pipeline", "--problem", &fixture("two_pi_i_root_matching.expf")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn height_of_one_third_encloses_log_three() {
    let out = pexp(&["height", "--rational", "1/3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["output"].clone();
    let l3 = 3f64.ln();
    assert!(decimal(&r["lower"]) <= l3 + 1e-15 && l3 - 1e-15 <= decimal(&r["upper"]));
    assert_eq!(r["precision_bits"], 128);
    assert!(String::from_utf8_lossy(&out.stderr).contains("log 3"));
}

#[test]
fn mahler_of_golden_ratio_polynomial() {
    let out = pexp(&["mahler", "--poly", "-1,-1,1"]);
    let r = json(&out)["output"].clone();
    assert!((decimal(&r["lower"]) - 1.618034).abs() < 1e-6);
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = pexp(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "usage");
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn invalid_problem_lists_violations() {
    let dir = scratch("invalid");
    let path = dir.join("bad.expf");
    std::fs::write(&path, r#"{"polynomial": [], "basis": [{"log_of": "0", "branch": 0}]}"#).unwrap();
    let out = pexp(&["pipeline", "--problem", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["error"]["kind"], "invalid_problem");
    let v: Vec<String> = r["error"]["details"]["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert!(v.iter().any(|m| m.contains("zero polynomial")), "{v:?}");
    assert!(v.iter().any(|m| m.contains("logarithm of zero")), "{v:?}");
}

#[test]
fn missing_file_is_an_error_record() {
    let out = pexp(&["expand", "--problem", "/nonexistent/problem.expf"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "io");
}

#[test]
fn guard_exceeded_exits_four() {
    let out = pexp(&["enumerate", "--dim", "3", "--bound", "50", "--guard", "100"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["error"]["kind"], "guard_exceeded");
}

#[test]
fn bound_matches_the_worked_value() {
    let out = pexp(&["bound", "--a3", "0.6931471805599453", "--slope", "0", "--offset", "6.907755278982137"]);
    assert_eq!(json(&out)["output"]["bound_B"], 9);
}

#[test]
fn enumerate_lists_the_ball() {
    let out = pexp(&["enumerate", "--dim", "2", "--bound", "1"]);
    let r = json(&out)["output"].clone();
    assert_eq!(r["total"], "5");
    assert_eq!(r["vectors"].as_array().unwrap().len(), 5);
}

#[test]
fn a3_and_independence() {
    let r = json(&pexp(&["a3", "--rationals", "2,3"]))["output"].clone();
    let a = decimal(&r["a3_lower"]);
    assert!(a > 0.424 && a <= 2f64.ln() * 3f64.ln() / 6f64.ln());
    let r = json(&pexp(&["indep", "--rationals", "2,4"]))["output"].clone();
    assert_eq!(r["independent"], false);
    let r = json(&pexp(&["indep", "--rationals", "2,3"]))["output"].clone();
    assert_eq!(r["independent"], true);
}

#[test]
fn relations_among_logs() {
    let r = json(&pexp(&["relations", "--rationals", "2,8"]))["output"].clone();
    let first = &r["relations"][0];
    assert_eq!(first["status"], "exactly_verified");
    let c: Vec<i64> = first["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!(c[0] + 3 * c[1], 0);
}

#[test]
fn transforms_round_trip() {
    let dir = scratch("transforms");
    let cases: &[(&str, &[&str])] = &[
        ("rescale", &["rescale", "--problem", "half_integers.expf"]),
        ("translate", &["translate", "--problem", "tau38.expf", "--class", "2"]),
        ("specialize", &["specialize", "--problem", "tau38.expf", "--assign", "log(2)=1/2"]),
    ];
    for (name, args) in cases {
        let mut args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        args[2] = fixture(&args[2]);
        let out_path = dir.join(format!("{name}.expf"));
        args.extend(["--out".into(), out_path.to_str().unwrap().into()]);
        let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let out = pexp(&refs);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
        let text = std::fs::read_to_string(&out_path).unwrap();
        parse_problem_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn split_writes_one_file_per_residue() {
    let dir = scratch("split");
    let src = dir.join("quarter.expf");
    std::fs::write(
        &src,
        r#"{
            "polynomial": [
                {"monomial": [1, 0], "value": "1"},
                {"monomial": [0, 1], "value": "-1"}
            ],
            "basis": [{"two_pi_i_over": "4"}, {"log_of": "2", "branch": 0}]
        }"#,
    )
    .unwrap();
    let out_path = dir.join("part.expf");
    let out = pexp(&["split2pi", "--problem", src.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = json(&out)["output"]["written"].as_array().unwrap().len();
    assert_eq!(written, 4);
    for k in 0..4 {
        let text = std::fs::read_to_string(dir.join(format!("part.{k}.expf"))).unwrap();
        parse_problem_str(&text).unwrap();
    }
}

#[test]
fn split_then_pipeline_agrees_with_direct_run() {
    let dir = scratch("split-pipeline");
    let out_path = dir.join("s.expf");
    let fx = fixture("two_pi_i_root_matching.expf");
    pexp(&["split2pi", "--problem", &fx, "--out", out_path.to_str().unwrap()]);
    let part = dir.join("s.0.expf");
    let a = json(&pexp(&["pipeline", "--problem", part.to_str().unwrap()]));
    let b = json(&pexp(&["pipeline", "--problem", &fx]));
    assert_eq!(a["output"]["solutions"][0]["vector"], b["output"]["solutions"][0]["vector"]);
}

#[test]
fn expand_reports_levels() {
    let r = json(&pexp(&["expand", "--problem", &fixture("tau38.expf")]))["output"].clone();
    let levels: Vec<u64> = r["terms"].as_array().unwrap().iter().map(|t| t["level"].as_u64().unwrap()).collect();
    assert_eq!(levels, vec![0, 1]);
}

#[test]
fn count_roots_of_exp_minus_z() {
    let out = pexp(&["count-roots", "--problem", &fixture("exp_minus_z.expf"), "--rect", "-4,-4,4,4", "--radii", "4,9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["output"].clone();
    assert_eq!(r["report"]["winding_count"], 2);
    let counts: Vec<u64> = r["density"].as_array().unwrap().iter().map(|d| d["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![2, 4]);
}

#[test]
fn count_roots_rejects_symbolic_coefficients() {
    let out = pexp(&["count-roots", "--problem", &fixture("tau38.expf"), "--radii", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precision_out_of_range_is_rejected() {
    let out = pexp(&["height", "--rational", "2", "--precision", "8"]);
    assert_eq!(out.status.code(), Some(2));
}
