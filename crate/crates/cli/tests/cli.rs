use std::fs;
use std::path::PathBuf;

use mwsplit_cli::{run, Outcome, EXIT_INTERNAL, EXIT_OK, EXIT_USER};
use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    root.join(name).display().to_string()
}

fn mwsplit(args: &[&str]) -> Outcome {
    run(std::iter::once("mwsplit").chain(args.iter().copied()))
}

fn structured(args: &[&str]) -> (u8, Value) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let out = mwsplit(&full);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn help_and_usage_errors() {
    let help = mwsplit(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("zariski"));
    let bad = mwsplit(&["frobnicate"]);
    assert_eq!(bad.code, EXIT_USER);
    assert!(bad.stdout.is_empty() && !bad.stderr.is_empty());
}

#[test]
fn missing_file_is_a_user_error() {
    let out = mwsplit(&["analyze", "/nonexistent/instance.toml"]);
    assert_eq!(out.code, EXIT_USER);
    assert!(out.stderr.starts_with("error: cannot read"));
}

#[test]
fn analyze_flags_the_printed_y() {
    let (code, v) = structured(&["analyze", &data("ex2_b1.toml")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["chi"], 1);
    assert_eq!(v["euler_sum"], 12);
    let exp = &v["expected"][0];
    assert_eq!(exp["combination"], "2*s0");
    assert_eq!(exp["x_matches"], true);
    assert_eq!(exp["y_matches"], false);
    assert_eq!(exp["computed_on_surface"], true);
    assert_eq!(exp["expected_on_surface"], false);
    let text = mwsplit(&["analyze", &data("ex2_b1.toml")]).stdout;
    assert!(text.contains("MISMATCH"));
}

#[test]
fn arith_evaluates_combinations() {
    let (code, v) = structured(&["arith", &data("ex1_b1.toml"), "s1+s2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["point"]["x"], "1/36*t^2 + 435/2*t - 921375/4");
    let (_, v) = structured(&["arith", &data("ex1_b1.toml"), "s0 - s0"]);
    assert_eq!(v["point"], "O");
}

#[test]
fn combination_errors_report_offsets() {
    let out = mwsplit(&["arith", &data("ex1_b1.toml"), "s1 + 3"]);
    assert_eq!(out.code, EXIT_USER);
    assert!(out.stderr.contains("byte 6"), "{}", out.stderr);
    let out = mwsplit(&["arith", &data("ex1_b1.toml"), "s7"]);
    assert_eq!(out.code, EXIT_USER);
    assert!(out.stderr.contains("unknown section"));
}

#[test]
fn divisibility_verdicts() {
    let (code, v) = structured(&["--verify", "divisible", &data("ex1_b1.toml"), "2*s0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "Divisible");
    assert_eq!(v["halves"].as_array().unwrap().len(), 2);
    let (_, v) = structured(&["divisible", &data("ex2_b1.toml"), "s1+s2"]);
    assert_eq!(v["verdict"], "NotDivisible");
}

#[test]
fn split_certificates() {
    let (code, v) = structured(&["--verify", "split", &data("ex1_b1.toml")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["crosscheck"], "AGREE");
    assert_eq!(v["certificate"]["sigma"], 1);
    assert_eq!(
        v["certificate"]["F"],
        "(1/12*t - 5825/12)*x + (6*t^2 - 12150*t)"
    );
    assert_eq!(v["certificate"]["G"], "x");
    let (code, v) = structured(&["split", &data("ex1_b2.toml"), "D2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "DoesNotSplit");
    assert_eq!(v["crosscheck"], "AGREE");
}

#[test]
fn odd_tangency_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_temp(
        &dir,
        "odd.toml",
        r#"
[surface]
d = 2
a2 = "0"
a4 = "0"
a6 = "-(t - 1)*(t - 2)*(t - 3)*(t - 4)*(t - 5)*(t - 6)"

[delta.zero]
f = "0"
"#,
    );
    let out = mwsplit(&["split", &file]);
    assert_eq!(out.code, EXIT_USER, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("odd intersection multiplicity"));
}

#[test]
fn zariski_comparisons() {
    let (b1, b2) = (data("ex1_b1.toml"), data("ex1_b2.toml"));
    let (code, v) = structured(&["zariski", &b1, &b2]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["conclusion"], "Distinguished");
    let (_, v) = structured(&["zariski", &b1, &b1]);
    assert_eq!(v["conclusion"], "NotDistinguished");
    let out = mwsplit(&["zariski", &b1, &data("ex2_b1.toml")]);
    assert_eq!(out.code, EXIT_USER);
    assert!(out.stderr.contains("mismatched instances"));
}

#[test]
fn basechange_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("pulled.toml").display().to_string();
    let out = mwsplit(&["basechange", &data("ex1_b1.toml"), "t^2", "-o", &out_path]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# "));
    let (code, v) = structured(&["divisible", &out_path, "2*s0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "Divisible");
    let (_, v) = structured(&["analyze", &out_path]);
    assert_eq!(v["chi"], 2);
    assert_eq!(v["euler_sum"], 24);
}

#[test]
fn constant_base_change_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("c.toml").display().to_string();
    let out = mwsplit(&["basechange", &data("ex1_b1.toml"), "5", "-o", &out_path]);
    assert_eq!(out.code, EXIT_USER);
    assert!(!dir.path().join("c.toml").exists());
}

#[test]
fn malformed_instances() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_temp(&dir, "u.toml", "[surface]\nd = 2\na2 = \"0\"\n");
    assert_eq!(mwsplit(&["analyze", &unknown]).code, EXIT_USER);
    let bad_expr = write_temp(
        &dir,
        "e.toml",
        "[surface]\nd = 2\na2 = \"t +\"\na4 = \"0\"\na6 = \"1\"\n",
    );
    let out = mwsplit(&["analyze", &bad_expr]);
    assert_eq!(out.code, EXIT_USER);
    assert!(out.stderr.contains("surface.a2"), "{}", out.stderr);
}

#[test]
fn internal_breaches_use_code_two() {
    assert_eq!(EXIT_INTERNAL, 2);
    let e = mwsplit_cli::CliError::Internal("x".into());
    assert_eq!(e.exit_code(), EXIT_INTERNAL);
}
