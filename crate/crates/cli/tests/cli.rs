use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_padic-cf"));
    c.env_remove("PADIC_CF_PRECISION");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const EXAMPLE: &str = r#"{"p": 5, "preperiod": ["0", "4/25", "-3/125"], "period": ["1/5"]}"#;

#[test]
fn expand_one_third() {
    let o = run(&["expand", "--p", "5", "--value", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[2, -3/5], Finite");
}

#[test]
fn expand_json_shape() {
    let (code, v) = json(&["expand", "--p", "5", "--value", "1/3"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["b0"]["u"], "2");
    assert_eq!(v["tail"][0]["u"], "-3");
    assert_eq!(v["tail"][0]["a"], 1);
    assert_eq!(v["status"], "finite");
}

#[test]
fn ruban_minus_p_is_periodic() {
    let o = run(&["expand", "--p", "5", "--kind", "ruban", "--value", "-5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PeriodDetected"), "{}", stdout(&o));
    let o = run(&["expand", "--p", "5", "--value", "-5"]);
    assert!(stdout(&o).contains("Finite"));
}

#[test]
fn quadratic_expansion_is_periodic() {
    let o = run(&["expand", "--p", "7", "--value", "sqrt(2)", "--max-steps", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PeriodDetected"), "{}", stdout(&o));
}

#[test]
fn height_h2_on_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example.json", EXAMPLE);
    let o = run(&["height", "--p", "5", "--cf", &f, "--check", "h2"]);
    let out = stdout(&o);
    assert!(out.contains("h = 9713125, bound = 9765625, PASS"), "{out}");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn height_h1_on_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example.json", EXAMPLE);
    let (code, v) = json(&["height", "--p", "5", "--cf", &f, "--check", "h1"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["polynomial"], serde_json::json!(["9129469", "5530075", "-9713125"]));
    assert_eq!(v["report"]["naive_h"], "9713125");
}

#[test]
fn height_h2_needs_inverse_p_period() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "cf.json", r#"{"p": 5, "preperiod": ["0", "4/25"], "period": ["2/5"]}"#);
    let o = run(&["height", "--p", "5", "--cf", &f, "--check", "h2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[E_USAGE]"));
}

#[test]
fn h2_counterexample_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "cf.json", r#"{"p": 5, "preperiod": ["0", "2/125", "2/25"], "period": ["1/5"]}"#);
    let o = run(&["height", "--p", "5", "--cf", &f, "--check", "h2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("VIOLATION: h = 9859375 exceeds the bound 9765625"));
}

#[test]
fn hypothesis_violation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "cf.json", r#"{"p": 5, "preperiod": ["0", "7/25", "1/5", "1/5"], "period": ["1/5"]}"#);
    let o = run(&["height", "--p", "5", "--cf", &f, "--check", "h2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("E_HYPOTHESIS"));
}

#[test]
fn bad_inputs_exit_one() {
    for args in [
        vec!["expand", "--p", "4", "--value", "1/3"],
        vec!["expand", "--p", "5", "--value", "1/x"],
        vec!["expand", "--p", "5"],
        vec!["height", "--p", "5", "--cf", "/nonexistent/cf.json", "--check", "h1"],
        vec!["nonsense"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
    let o = run(&["expand", "--p", "4", "--value", "1/3"]);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[E_PRIME]"));
}

#[test]
fn malformed_json_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "cf.json", "{not json");
    let o = run(&["height", "--p", "5", "--cf", &f, "--check", "h1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[E_PARSE]"));
}

#[test]
fn precision_env_is_validated() {
    let o = bin()
        .env("PADIC_CF_PRECISION", "4")
        .args(["expand", "--p", "5", "--value", "1/3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = bin()
        .env("PADIC_CF_PRECISION", "200")
        .args(["expand", "--p", "7", "--value", "sqrt(2)", "--max-steps", "10"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn euclid_matches_expansion() {
    let (code, v) = json(&["euclid", "--p", "5", "--x0", "1", "--x1", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["steps"][0]["q"]["u"], "2");
    assert_eq!(v["steps"][0]["r"], "-5");
}

#[test]
fn convergents_report_laws() {
    let (code, v) = json(&["convergents", "--p", "5", "--value", "7/11", "--terms", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["laws"]["violations"], serde_json::json!([]));
    assert_eq!(v["rows"][2]["A"], "2");
}

#[test]
fn floor_contract_exit_codes() {
    let o = run(&["floor", "--p", "5", "--value", "2/5", "--kind", "counterexample"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("|x - s(x)|_p < 1: FAIL"));
    let o = run(&["floor", "--p", "5", "--value", "2/5", "--kind", "browkin"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn csv_output() {
    let o = run(&["expand", "--p", "5", "--value", "1/3", "--csv"]);
    assert_eq!(stdout(&o), "i,u,a,quotient\n0,2,0,2\n1,-3,1,-3/5\n");
    let o = run(&["expand", "--p", "5", "--value", "1/3", "--output", "csv"]);
    assert_eq!(stdout(&o), "i,u,a,quotient\n0,2,0,2\n1,-3,1,-3/5\n");
}

#[test]
fn sweep_default_primes_pass() {
    let o = run(&["sweep", "--primes", "3,5,7,11", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("PASS 200/200").count(), 20);
}

#[test]
fn sweep_counterexample_floor_fails() {
    let o = run(&["sweep", "--primes", "3,5", "--samples", "10", "--kind", "counterexample", "--max-steps", "100"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("contract     FAIL"), "{out}");
    assert!(out.contains("VIOLATION: p = 3 contract: x = "));
}

#[test]
fn empty_sweep_exits_one() {
    assert_eq!(run(&["sweep", "--samples", "5"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--primes", "5", "--samples", "0"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sweep.json", r#"{"primes": [], "samples": 10}"#);
    assert_eq!(run(&["sweep", "--spec", &f]).status.code(), Some(1));
}

#[test]
fn sweep_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sweep.json", r#"{"primes": [7], "samples": 5, "suites": ["determinant"]}"#);
    let (code, v) = json(&["sweep", "--spec", &f]);
    assert_eq!(code, 0);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 1);
    assert_eq!(v["matrix"][0]["checked"], 5);
}

#[test]
fn seeded_output_is_byte_identical() {
    let args = ["audit", "--p", "5", "--kind", "h1", "--samples", "5", "--seed", "11", "--json"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
    let c = run(&["audit", "--p", "5", "--kind", "h1", "--samples", "5", "--seed", "12", "--json"]).stdout;
    assert_ne!(a, c);
}

#[test]
fn audit_h2_reports_violations() {
    let o = run(&["audit", "--p", "5", "--kind", "h2", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("VIOLATION: sample 0"));
}

#[test]
fn audit_fibonacci_passes() {
    let o = run(&["audit", "--p", "7", "--kind", "fibonacci", "--samples", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn family_ooto_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "spec.json",
        r#"{"p": 5, "d_cap": 2, "k_bound": 2, "c": "15/2",
            "runs": [{"n": 1, "lambda": 8, "block": ["1/5", "-2/25"]}],
            "pool": ["1/5", {"u": "2", "a": 2}]}"#,
    );
    let (code, v) = json(&["family", "ooto", "--p", "5", "--length", "20", "--spec", &f, "--emit-certificate"]);
    assert_eq!(code, 0);
    assert_eq!(v["quotients"].as_array().unwrap().len(), 20);
    let entries = v["certificate"]["entries"].as_array().unwrap();
    assert!(entries.iter().all(|e| e["holds"] == true));
    assert!(entries.iter().any(|e| e["hypothesis"] == "block_repetition"));
}

#[test]
fn family_qper_low_c_fails() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "spec.json",
        r#"{"p": 5, "d_cap": 2, "k_bound": 1, "c": "1/2",
            "runs": [{"n": 2, "k": 1, "lambda": 3}, {"n": 5, "k": 1, "lambda": 4}],
            "pool": ["2/25"]}"#,
    );
    let o = run(&["family", "qper", "--p", "5", "--length", "12", "--spec", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("VIOLATION: c_threshold"), "{}", stdout(&o));
}

#[test]
fn family_needs_spec() {
    let o = run(&["family", "qper", "--p", "5", "--length", "12"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn family_sturmian_and_thue_morse() {
    let o = run(&["family", "sturmian", "--p", "5", "--length", "8", "--slope", "(3 - sqrt(5))/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[0, 1/5, -1/5, 1/5, 1/5, -1/5, 1/5, -1/5, 1/5]"));
    let (code, v) = json(&["family", "thue-morse", "--p", "5", "--length", "64", "--emit-certificate"]);
    assert_eq!(code, 0);
    let pals = v["certificate"]["palindromic_prefixes"].as_array().unwrap();
    assert!(pals.contains(&serde_json::json!(16)) && pals.contains(&serde_json::json!(64)));
    let o = run(&["family", "sturmian", "--p", "5", "--length", "8", "--slope", "1/3"]);
    assert_eq!(o.status.code(), Some(1));
}
