use std::path::PathBuf;
use std::process::{Command, Output};

fn g2kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2kit")).args(args).output().expect("run g2kit")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn scratch(name: &str, body: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn fixture_commands_pass() {
    assert_eq!(g2kit(&["check", "lie2", &fixture("abelian.json")]).status.code(), Some(0));
    assert_eq!(g2kit(&["check", "lie2", &fixture("sl2_lie2.json")]).status.code(), Some(0));
    let o = g2kit(&["check", "action", &fixture("ga_sl2.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn zero_denominator_is_an_input_error() {
    let path = scratch("bad_rational.json", r#"{"kind":"lie2","dim_h":1,"dim_g":1,"delta":[[0,0,"1/0"]]}"#);
    let o = g2kit(&["check", "lie2", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("$.delta[0][2]"), "{}", stderr(&o));
}

#[test]
fn malformed_json_names_the_line() {
    let path = scratch("malformed.json", "{\n  \"kind\": \"lie2\",\n  \"dim_h\": 1,,\n}");
    let o = g2kit(&["check", "lie2", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn failing_jacobi_exits_one() {
    // [e0,e1] = e2, [e1,e2] = e0, [e0,e2] = e0 violates Jacobi
    let body = r#"{"kind":"lie2","dim_h":0,"dim_g":3,
        "bracket_g":[[0,1,2,"1"],[1,2,0,"1"],[0,2,0,"1"]]}"#;
    let path = scratch("bad_jacobi.json", body);
    let o = g2kit(&["--format", "json", "check", "lie2", &path]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "g2kit/1");
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["status"] == "fail"));
}

#[test]
fn wrong_bundle_kind_is_an_input_error() {
    let o = g2kit(&["check", "action", &fixture("abelian.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(g2kit(&["integrate", "--example", "nowhere"]).status.code(), Some(2));
    assert_eq!(g2kit(&["--samples", "0", "integrate", "--example", "tm"]).status.code(), Some(2));
    assert_eq!(g2kit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn convert_round_trips_through_files() {
    let o = g2kit(&["convert", "lie2", &fixture("sl2_lie2.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let crossed = scratch("sl2_crossed.json", &stdout(&o));
    let back = g2kit(&["convert", "crossed", &crossed]);
    assert_eq!(back.status.code(), Some(0), "{}", stderr(&back));
    let original: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("sl2_lie2.json")).unwrap()).unwrap();
    let again: serde_json::Value = serde_json::from_str(&stdout(&back)).unwrap();
    assert_eq!(original, again);
}

#[test]
fn derive_brackets_reads_back_the_input() {
    let o = g2kit(&["derive", "brackets", &fixture("sl2_lie2.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let original: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("sl2_lie2.json")).unwrap()).unwrap();
    let again: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(original, again);
}

#[test]
fn integrate_reports_in_json() {
    let o = g2kit(&["--format", "json", "--samples", "20", "integrate", "--example", "heisenberg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"equivariance") && names.contains(&"Phi action law"), "{names:?}");
    let psi_only = g2kit(&["--format", "json", "--samples", "20", "integrate", "--example", "tm", "--psi-only"]);
    assert!(!stdout(&psi_only).contains("Phi action law"));
}
