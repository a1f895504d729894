use std::process::{Command, Output};

use serde_json::Value;

fn ratnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratnorm")).args(args).output().expect("spawn ratnorm")
}

fn json(args: &[&str]) -> Value {
    let out = ratnorm(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn strip_times(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_time_seconds");
            map.values_mut().for_each(strip_times);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_times),
        _ => {}
    }
}

#[test]
fn kernel_closed_form() {
    let v = json(&["kernel", "i", "--t", "2", "--r", "0.5", "--method", "series"]);
    let value = v["results"]["value"].as_f64().unwrap();
    assert!((value - 4.0 / 3.0).abs() < 1e-13, "{value}");
}

#[test]
fn exact_h2_at_origin() {
    let v = json(&["bernstein", "exact-h2", "--n", "4", "--r", "0"]);
    assert!((v["results"]["value"].as_f64().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(ratnorm(&["verify", "psi", "--r", "0.5"]).status.code(), Some(0));
    assert_eq!(ratnorm(&["verify", "psi", "--r", "0.5", "--tol", "0"]).status.code(), Some(1));
    assert_eq!(ratnorm(&["--no-such-flag"]).status.code(), Some(2));
    assert_eq!(ratnorm(&["norm", "--f", "{\"bogus\": 1}", "--space", "hardy:2"]).status.code(), Some(2));
}

#[test]
fn runs_are_deterministic() {
    let args = ["bernstein", "sample", "--n", "3", "--r", "0.6", "--samples", "5", "--seed", "7"];
    let mut a = json(&args);
    let mut b = json(&args);
    strip_times(&mut a);
    strip_times(&mut b);
    assert_eq!(a, b);
}

#[test]
fn csv_matches_json() {
    let args = ["bernstein", "sweep", "--n-list", "2,4", "--r-list", "0.3,0.7"];
    let v = json(&args);
    let rows = v["results"].as_array().unwrap();
    let mut csv_args = vec!["--format", "csv"];
    csv_args.extend(args);
    let out = ratnorm(&csv_args);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let records: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), rows.len());
    for (record, row) in records.iter().zip(rows) {
        for key in ["value", "normalized", "r"] {
            let idx = headers.iter().position(|h| h == key).unwrap();
            let from_csv: f64 = record[idx].parse().unwrap();
            assert_eq!(from_csv, row[key].as_f64().unwrap(), "{key}");
        }
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.csv");
    let out = ratnorm(&["--format", "csv", "--out", path.to_str().unwrap(), "kernel", "phi", "--t", "3", "--r", "0.4"]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}
