use std::fs;
use std::process::{Command, Output};

fn spinpointer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinpointer")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn zero_spins_is_a_config_error() {
    let out = spinpointer(&["reference", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("spinpointer:"));
}

#[test]
fn empty_spread_list_in_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    fs::write(&path, r#"{"command":"sweep","n":[1],"delta":[]}"#).unwrap();
    let out = spinpointer(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_and_command_mismatch_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, r#"{"n":[1],"spreads":[0.5]}"#).unwrap();
    assert_eq!(spinpointer(&["sweep", "--config", unknown.to_str().unwrap()]).status.code(), Some(2));
    let other = dir.path().join("other.json");
    fs::write(&other, r#"{"command":"bloch"}"#).unwrap();
    assert_eq!(spinpointer(&["sweep", "--config", other.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unconverged_quadrature_exits_with_numerical_code() {
    let out = spinpointer(&["sweep", "--n", "1", "--delta", "0.5", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn echoed_config_reproduces_the_run() {
    let first = stdout(&spinpointer(&["sweep", "--n", "2", "--delta", "0.3,0.8", "--guess-rule", "best-of-axis"]));
    let config = first.lines().nth(1).unwrap().strip_prefix("# config=").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("echo.json");
    fs::write(&path, config).unwrap();
    let second = stdout(&spinpointer(&["sweep", "--config", path.to_str().unwrap()]));
    let body = |s: &str| s.lines().skip(2).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(body(&first), body(&second));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ref.csv");
    let printed = stdout(&spinpointer(&["reference", "--n", "1,2,3", "--format", "csv"]));
    stdout(&spinpointer(&["reference", "--n", "1,2,3", "--format", "csv", "--out", path.to_str().unwrap()]));
    assert_eq!(fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn json_output_carries_schema_and_records() {
    let text = stdout(&spinpointer(&["optimize", "--n", "2"]));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema"], 1);
    let record = &doc["records"][0];
    assert_eq!(record["n_spins"], 2);
    assert_eq!(record["boundary_flag"], false);
    assert!(record["f_max"].as_f64().unwrap() > 0.74);
}

#[test]
fn disturbance_marker_row_is_inserted_in_order() {
    let text = stdout(&spinpointer(&["disturbance", "--n", "2", "--delta", "0.3,0.9", "--mark-delta-opt"]));
    let rows: Vec<Vec<&str>> = text.lines().skip(3).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1].last(), Some(&"true"));
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.5);
}
