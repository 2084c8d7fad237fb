use std::io::Write;
use std::process::{Command, Output};

use hoffman::exact::parse_rational;
use serde_json::Value;

fn hoffman(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hoffman"));
    cmd.args(args).env_remove("HOFFMAN_ENUM_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = hoffman(args, &[]);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn instance_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const C_TEXT: &str = r#"{
  "n": 2,
  "A": [["1","0"],["0","1"],["1","1"]],
  "c": ["-1","-1"],
  "norm": "linf"
}"#;

#[test]
fn hof_instance_c() {
    let v = ok_json(&["hof", "instanceC"]);
    assert_eq!(v["command"], "hof");
    assert_eq!(v["instance"]["dual_feasible"], true);
    let r = &v["result"];
    assert_eq!(r["value"]["exact"], "2");
    assert_eq!(r["certificate"]["D"], serde_json::json!([3]));
    assert_eq!(r["certificate"]["S"], serde_json::json!([1, 3]));
    assert_eq!(r["certificate"]["b"], serde_json::json!(["0", "1", "0"]));
    assert_eq!(r["certificate"]["x"], serde_json::json!(["0", "0"]));
}

#[test]
fn file_and_bundled_instance_share_a_digest() {
    let f = instance_file(C_TEXT);
    let from_file = ok_json(&["hof", f.path().to_str().unwrap()]);
    let bundled = ok_json(&["hof", "instanceC"]);
    assert_eq!(from_file["instance"]["digest"], bundled["instance"]["digest"]);
    assert_eq!(from_file["result"], bundled["result"]);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        serde_json::to_string(&v).unwrap()
    };
    for args in [
        &["validate", "instanceC", "--samples", "20", "--seed", "3"][..],
        &["breaks", "instanceC", "--from", "0,0,1", "--to", "0,1,0"][..],
    ] {
        assert_eq!(strip(ok_json(args)), strip(ok_json(args)));
    }
}

fn collect_exact(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            if let Some(Value::String(s)) = map.get("exact") {
                out.push(s.clone());
            }
            map.values().for_each(|x| collect_exact(x, out));
        }
        Value::Array(items) => items.iter().for_each(|x| collect_exact(x, out)),
        _ => {}
    }
}

#[test]
fn exact_values_reparse() {
    let mut values = Vec::new();
    for args in [
        &["hof", "instanceC", "--terms"][..],
        &["validate", "instanceA", "--samples", "10", "--seed", "1"][..],
        &["endset", "--points", "1,0;1,1", "--dual-norm", "l1"][..],
    ] {
        collect_exact(&ok_json(args), &mut values);
    }
    assert!(values.len() > 10);
    for s in values.iter().filter(|s| *s != "inf") {
        assert_eq!(parse_rational(s).unwrap().to_string(), *s);
    }
}

#[test]
fn subcommands_on_instance_c() {
    assert_eq!(ok_json(&["kkt", "instanceC"])["result"]["family"], serde_json::json!([[3], [1, 2]]));
    assert_eq!(ok_json(&["kkt", "instanceC", "--b", "0,1,0"])["result"]["family"], serde_json::json!([[3]]));
    assert_eq!(ok_json(&["lipusc", "instanceC", "--b", "0,1,0"])["result"]["value"]["exact"], "2");
    assert_eq!(ok_json(&["clm", "instanceC", "--b", "0,1,0", "--x", "0,0"])["result"]["value"]["exact"], "2");
    assert_eq!(ok_json(&["canonical", "instanceC"])["result"]["canonical_hoffman"], "Infinite");
    assert_eq!(ok_json(&["canonical", "zeroRows"])["result"]["canonical_hoffman"], "Zero");
    let breaks = ok_json(&["breaks", "instanceC", "--from", "0,0,1", "--to", "0,1,0"]);
    assert_eq!(breaks["result"]["break_steps"], serde_json::json!(["1/2"]));
}

#[test]
fn negative_and_fractional_flag_values() {
    let v = ok_json(&["clm", "instanceC", "--b", "1,1,-1", "--x", "-2,1"]);
    assert_eq!(v["result"]["value"]["exact"], "2");
    let v = ok_json(&["lipusc", "instanceB", "--b", "-1/2"]);
    assert_eq!(v["result"]["value"]["exact"], "1/2");
}

#[test]
fn validate_reports_checks_and_estimate() {
    let v = ok_json(&["validate", "instanceC", "--samples", "50", "--seed", "7"]);
    let r = &v["result"];
    assert_eq!(r["passed"], true);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["soundness", "probe_attainment", "chain", "attainment"]);
    assert_eq!(r["pointwise"]["label"], "ESTIMATE");
    assert_eq!(r["pointwise"]["nominal_b"], serde_json::json!(["0", "1", "0"]));
}

#[test]
fn endset_points() {
    let v = ok_json(&["endset", "--points", "3,-4", "--dual-norm", "l1"]);
    assert_eq!(v["result"]["distance"]["exact"], "7");
    assert!(v.get("instance").is_none());
    let v = ok_json(&["endset", "--points", "3,-4", "--dual-norm", "linf"]);
    assert_eq!(v["result"]["distance"]["exact"], "4");
    let v = ok_json(&["endset", "--points", "0,0", "--dual-norm", "linf"]);
    assert_eq!(v["result"]["distance"]["exact"], "inf");
}

fn exit_code(args: &[&str], env: &[(&str, &str)]) -> (i32, String) {
    let out = hoffman(args, env);
    assert!(out.stdout.is_empty() || out.status.success());
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn input_errors_exit_2() {
    let zero_den = instance_file(&C_TEXT.replace(r#"["1","0"]"#, r#"["1/0","0"]"#));
    let (code, err) = exit_code(&["hof", zero_den.path().to_str().unwrap()], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("A[0][0]"), "{err}");
    assert!(!err.contains("panicked"));

    let typo = instance_file(&C_TEXT.replace(r#""norm""#, r#""nrom": "l1", "norm""#));
    let path = typo.path().to_str().unwrap();
    let (code, err) = exit_code(&["hof", path], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("line"), "{err}");
    assert_eq!(exit_code(&["hof", path, "--lenient"], &[]).0, 0);

    assert_eq!(exit_code(&["hof", "no-such-instance"], &[]).0, 2);
    assert_eq!(exit_code(&["clm", "instanceC", "--b", "0,1", "--x", "0,0"], &[]).0, 2);
    assert_eq!(exit_code(&["lipusc", "instanceC", "--b", "0,x,0"], &[]).0, 2);
    assert_eq!(exit_code(&["frobnicate"], &[]).0, 2);
    assert_eq!(exit_code(&["hof", "instanceC"], &[("HOFFMAN_ENUM_CAP", "many")]).0, 2);
}

#[test]
fn domain_errors_exit_3() {
    let infeasible_c = instance_file(&C_TEXT.replace(r#""c": ["-1","-1"]"#, r#""c": ["1","1"]"#));
    let path = infeasible_c.path().to_str().unwrap();
    let (code, err) = exit_code(&["hof", path], &[]);
    assert_eq!(code, 3);
    assert!(err.contains("argmin mapping has empty domain"), "{err}");
    // the canonical classifier does not need the dual feasibility flag
    let v = ok_json(&["canonical", path]);
    assert_eq!(v["instance"]["dual_feasible"], false);

    assert_eq!(exit_code(&["clm", "instanceC", "--b", "0,1,0", "--x", "-1,0"], &[]).0, 3);
    assert_eq!(exit_code(&["clm", "instanceC", "--b", "0,1,0", "--x", "5,5"], &[]).0, 3);
    let inconsistent = instance_file(r#"{"n": 1, "A": [["1"], ["-1"]], "c": ["0"]}"#);
    assert_eq!(exit_code(&["lipusc", inconsistent.path().to_str().unwrap(), "--b", "-1,0"], &[]).0, 3);
}

#[test]
fn enumeration_cap_exits_4() {
    assert_eq!(exit_code(&["hof", "instanceC"], &[("HOFFMAN_ENUM_CAP", "2")]).0, 4);
    assert_eq!(exit_code(&["hof", "instanceC"], &[("HOFFMAN_ENUM_CAP", "3")]).0, 0);
}
