//! Black-box tests of the binary: exit codes, determinism, schema errors,
//! builtin manifest conformance, and the emitted document shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qsact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsact"))
        .args(args)
        .output()
        .expect("run qsact")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn fixture_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qsact-fixtures-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_fixture(name: &str, content: &Value) -> PathBuf {
    let path = fixture_dir().join(name);
    std::fs::write(&path, serde_json::to_string(content).unwrap()).unwrap();
    path
}

fn z2_action_json() -> Value {
    let act = qsact::instances::z2_ad_sigma_z();
    serde_json::to_value(qsact::json::action_to_json(&act)).unwrap()
}

fn trace_state_json() -> Value {
    let omega = qsact::fqs::State::<qsact::scalar::C64>::tracial(&qsact::FdAlgebra::m2());
    serde_json::to_value(qsact::json::state_to_json(&omega)).unwrap()
}

#[test]
fn builtins_match_their_expected_status_manifest() {
    let list = stdout_json(&qsact(&["list-builtins"]));
    let builtins = list["builtins"].as_array().unwrap();
    assert_eq!(builtins.len(), 6);
    let names: Vec<&str> = builtins
        .iter()
        .map(|b| b["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"psi_q"));
    assert!(names.contains(&"z2_ad_sigma_z"));
    for b in builtins {
        let name = b["name"].as_str().unwrap();
        let kind = b["kind"].as_str().unwrap();
        let expected_pass = b["expected_status"].as_str().unwrap() == "pass";
        let out = match kind {
            "semigroup" => qsact(&["check-semigroup", "--builtin", name]),
            "action" => qsact(&["check-action", "--builtin", name]),
            "symbolic" => qsact(&["suq2-verify", "--q", "1/2"]),
            other => panic!("unknown kind {other}"),
        };
        let code = out.status.code();
        assert_eq!(
            code,
            Some(if expected_pass { 0 } else { 1 }),
            "builtin {name} expected {}",
            if expected_pass { "pass" } else { "fail" }
        );
    }
}

#[test]
fn exit_codes_cover_the_contract() {
    // 0: passing check
    assert_eq!(
        qsact(&["check-semigroup", "--builtin", "left_zero_2"])
            .status
            .code(),
        Some(0)
    );
    // 1: failing check
    assert_eq!(
        qsact(&["check-action", "--builtin", "idempotent_noncontinuous"])
            .status
            .code(),
        Some(1)
    );
    // 2: malformed input
    let bad = write_fixture("bad.json", &serde_json::json!({"nonsense": true}));
    let out = qsact(&["check-action", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    // 2: missing file
    assert_eq!(
        qsact(&["check-action", "/nonexistent/file.json"])
            .status
            .code(),
        Some(2)
    );
    // 2: unknown subcommand (clap usage error)
    assert_eq!(qsact(&["frobnicate"]).status.code(), Some(2));
    // 2: invalid q
    assert_eq!(qsact(&["suq2-verify", "--q", "3/2"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_apart_from_timestamp() {
    let a = stdout_json(&qsact(&["check-action", "--builtin", "z2_ad_sigma_z"]));
    let b = stdout_json(&qsact(&["check-action", "--builtin", "z2_ad_sigma_z"]));
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn failing_checks_carry_identity_citations() {
    let report = stdout_json(&qsact(&[
        "check-action",
        "--builtin",
        "idempotent_noncontinuous",
    ]));
    assert_eq!(report["overall"], "fail");
    let failing: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    for check in failing {
        let citation = check["citation"].as_str().unwrap();
        assert!(!citation.is_empty(), "failing check must cite its identity");
    }
}

#[test]
fn extract_rep_emits_u_t_and_report() {
    let action = write_fixture("z2.json", &z2_action_json());
    let state = write_fixture("trace.json", &trace_state_json());
    let out = qsact(&[
        "extract-rep",
        action.to_str().unwrap(),
        "--state",
        state.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let u = doc["u"].as_array().unwrap();
    assert_eq!(u.len(), 4);
    assert_eq!(u[0].as_array().unwrap().len(), 4);
    let t = doc["T"].as_array().unwrap();
    assert_eq!(t.len(), 4);
    assert_eq!(doc["report"]["overall"], "pass");
}

#[test]
fn classify_m2_reports_exact_q_for_the_symbolic_builtin() {
    let out = qsact(&["classify-m2", "--builtin", "psi_q", "--q", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["q"], "1/2");
    assert_eq!(doc["ergodic"], true);
    assert_eq!(doc["overall"], "pass");
    assert_eq!(doc["certificate"]["kind"], "symbolic");
    // q outside (0, 1] is a parameter error
    assert_eq!(
        qsact(&["classify-m2", "--builtin", "psi_q", "--q", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn classify_m2_refuses_without_faithful_invariant_state() {
    let out = qsact(&["classify-m2", "--builtin", "idempotent_noncontinuous"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["overall"], "fail");
    assert!(doc["refused"].as_str().is_some());
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["status"] == "skipped"));
}

#[test]
fn batch_mode_runs_a_directory() {
    let dir = std::env::temp_dir().join(format!("qsact-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        dir.join("z2_action.json"),
        serde_json::to_string(&z2_action_json()).unwrap(),
    )
    .unwrap();
    std::fs::write(
        dir.join("table.json"),
        r#"{"semigroup_table": [[0,1],[1,0]]}"#,
    )
    .unwrap();
    let out = qsact(&["check-action", "--batch", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["overall"], "pass");
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let path = std::env::temp_dir().join(format!("qsact-out-{}.json", std::process::id()));
    let out = qsact(&[
        "check-semigroup",
        "--builtin",
        "null_semigroup",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["overall"], "pass");
    std::fs::remove_file(path).ok();
}

#[test]
fn exact_flag_demands_identically_zero_residuals() {
    let fixture = write_fixture(
        "exact_table.json",
        &serde_json::json!({"semigroup_table": [[0, 1], [1, 0]]}),
    );
    let out = qsact(&["check-semigroup", fixture.to_str().unwrap(), "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    for check in doc["checks"].as_array().unwrap() {
        if let Some(res) = check["residual"].as_f64() {
            assert_eq!(res, 0.0, "exact run must produce exact zeros");
        }
    }
}
