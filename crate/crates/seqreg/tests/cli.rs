use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn seqreg(args: &[&str], tolerance: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_seqreg"));
    cmd.args(args).env_remove("SEQREG_TOLERANCE");
    if let Some(t) = tolerance {
        cmd.env("SEQREG_TOLERANCE", t);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    seqreg(args, None)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn factorial_minorant_is_the_sequence() {
    let f = data("factorial.json");
    let out = run(&["minorant", f.to_str().unwrap(), "--window", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let result = &v["result"];
    let principal: Vec<u64> = result["principal_indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(principal, (0..12).collect::<Vec<_>>());
    let mut factorial = 1u64;
    for (p, m) in result["regularized"].as_array().unwrap().iter().enumerate() {
        if p > 0 {
            factorial *= p as u64;
        }
        assert_eq!(m.as_str().unwrap(), factorial.to_string());
    }
    assert_eq!(result["regime"]["name"], "standard");
}

#[test]
fn phireg_exp_verifies() {
    let f = data("example41i.json");
    let out = run(&["phireg", "--phi", "exp", f.to_str().unwrap(), "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["command"], "phireg");
    assert_eq!(v["result"]["phi"]["type"], "exp");
    assert!(v["result"]["trace"]["breakpoints"].is_array());
    assert_eq!(v["oracle"][0]["within_tolerance"], true);
}

#[test]
fn assoc_emits_csv_with_oracle_block() {
    let f = data("factorial.json");
    let out = run(&["assoc", "--grid", "0:10:0.1", f.to_str().unwrap(), "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("t,omega_direct,omega_piecewise,omega_integral,omega_tilde,omega_double_tilde")
    );
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 102);
    assert_eq!(text.lines().filter(|l| l.starts_with("# oracle")).count(), 3);
    assert!(!text.contains("within_tolerance=false"));
    let row = text.lines().find(|l| l.starts_with("0.3,")).expect("tidy grid values");
    assert_eq!(row.split(',').count(), 6);
}

#[test]
fn verify_deviation_exits_3() {
    let f = data("factorial.json");
    let out = seqreg(&["assoc", f.to_str().unwrap(), "--verify"], Some("1e-300"));
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("verify:"));
}

#[test]
fn case1_names_the_regime() {
    let f = data("case1.json");
    let out = run(&["minorant", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Case 1 (liminf a_p/p = −∞): minorant degenerates"));
    let v = json(&out);
    assert_eq!(v["result"]["principal_indices"], serde_json::json!([0]));
    let out = run(&["trace", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Case 1"));
    assert!(out.stdout.is_empty());
}

#[test]
fn parse_errors_exit_1_with_location() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{\n  \"kind\": \"log\",\n  \"prefix\": [0, 1,]\n}\n");
    let out = run(&["classify", &broken]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("broken.json:3:"), "{}", stderr(&out));

    let field = write(&dir, "field.json", r#"{"kind": "log", "prefix": [0, "one"]}"#);
    let out = run(&["classify", &field]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("field `prefix[1]`"), "{}", stderr(&out));

    let out = run(&["classify", "/nonexistent/seq.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn configuration_errors_exit_1() {
    let f = data("factorial.json");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["minorant", f, "--window", "3"]).status.code(), Some(1));
    assert_eq!(run(&["phireg", f]).status.code(), Some(1));
    assert_eq!(run(&["compare", f, "--phi1", "exp"]).status.code(), Some(1));
    assert_eq!(run(&["assoc", f, "--grid", "0:1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate", f]).status.code(), Some(1));
    assert_eq!(seqreg(&["minorant", f], Some("0.5")).status.code(), Some(1));
    assert_eq!(seqreg(&["minorant", f], Some("abc")).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn tolerance_comes_from_the_environment() {
    let f = data("factorial.json");
    let out = seqreg(&["classify", f.to_str().unwrap()], Some("1e-6"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tolerance"], 1e-6);
    let out = seqreg(&["classify", f.to_str().unwrap(), "--tolerance", "1e-4"], Some("1e-6"));
    assert_eq!(json(&out)["tolerance"], 1e-4);
}

#[test]
fn output_is_deterministic() {
    let f = data("noisy.json");
    for args in [
        vec!["minorant", f.to_str().unwrap(), "--verify"],
        vec!["phireg", "--phi", "expaffine:1,1/2", f.to_str().unwrap()],
        vec!["assoc", f.to_str().unwrap(), "--emit", "json"],
    ] {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn regularized_output_round_trips() {
    let dir = TempDir::new().unwrap();
    for name in ["noisy.json", "factorial.json", "example41i.json"] {
        let f = data(name);
        let first = json(&run(&["minorant", f.to_str().unwrap(), "--window", "16"]));
        let sequence = &first["result"]["sequence"];
        assert!(sequence.is_object(), "{name}");
        let again_path = write(&dir, name, &sequence.to_string());
        let out = run(&["minorant", &again_path, "--window", "16"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let again = json(&out);
        let mut values = again["result"]["regularized"].as_array().unwrap().clone();
        if let Some(rest) = again["result"]["provisional"]["regularized"].as_array() {
            values.extend(rest.iter().cloned());
        }
        assert_eq!(Value::Array(values), sequence["prefix"], "{name}");
    }
}

#[test]
fn multiple_inputs_keep_their_order() {
    let names = ["noisy.json", "factorial.json", "example41i.json", "case1.json"];
    let paths: Vec<String> = names.iter().map(|n| data(n).to_str().unwrap().to_string()).collect();
    let mut args = vec!["classify"];
    args.extend(paths.iter().map(String::as_str));
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let inputs: Vec<&str> = v.as_array().unwrap().iter().map(|d| d["input"].as_str().unwrap()).collect();
    assert_eq!(inputs, paths.iter().map(String::as_str).collect::<Vec<_>>());

    let mut args = vec!["minorant"];
    args.extend(paths.iter().map(String::as_str));
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out).as_array().unwrap().len(), 4);
}

#[test]
fn compare_reports_ordering() {
    let f = data("noisy.json");
    let out = run(&["compare", "--phi1", "exp", "--phi2", "infinite", f.to_str().unwrap(), "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let result = &json(&out)["result"];
    assert_eq!(result["first_is_smaller"], true);
    assert_eq!(result["monotone"], true);
    assert_eq!(result["below_original"], true);
    assert_eq!(result["second"], result["minorant"]);

    let out = run(&["compare", "--phi1", "expaffine:1,0", "--phi2", "expaffine:2,0", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not comparable"));
}

#[test]
fn csv_for_every_command() {
    let f = data("noisy.json");
    let f = f.to_str().unwrap();
    for (args, header) in [
        (vec!["classify", f], "key,value"),
        (vec!["minorant", f], "p,value,regularized,log_value,log_regularized,principal,stable"),
        (vec!["trace", f], "k,trace"),
        (vec!["phireg", "--phi", "exp", f, "--extended"], "t,m_phi,trace_phi"),
    ] {
        let mut args = args;
        args.extend(["--emit", "csv"]);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert_eq!(String::from_utf8(out.stdout).unwrap().lines().next(), Some(header));
    }
}
