use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn csknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csknot")).args(args).env_remove("CSKNOT_THREADS").output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("csknot-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn graphs_degree_one() {
    let v = json(&csknot(&["graphs", "--degree", "1"]));
    let rows = v["graphs"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["aut"], 2);
    assert_eq!(rows[0]["aut_plus"], 2);
    assert_eq!(rows[0]["class"], "primitive");
}

#[test]
fn graphs_degree_zero_and_cap() {
    let v = json(&csknot(&["graphs", "--degree", "0"]));
    assert_eq!(v["count"], 0);
    assert!(v["note"].is_string());
    assert_eq!(csknot(&["graphs", "--degree", "9"]).status.code(), Some(2));
    let t = csknot(&["graphs", "--degree", "2", "--format", "table"]);
    assert!(String::from_utf8_lossy(&t.stdout).contains("|Aut+|"));
}

#[test]
fn algebra_dimensions_are_deterministic() {
    let a = csknot(&["algebra", "--degree", "2"]);
    let v = json(&a);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["basis"].as_array().unwrap().len(), 2);
    assert_eq!(json(&csknot(&["algebra", "--degree", "1"]))["dim"], 1);
    assert_eq!(csknot(&["algebra", "--degree", "2"]).stdout, a.stdout);
}

#[test]
fn invariant_errors() {
    assert_eq!(csknot(&["invariant", "--knot", "/nonexistent/knot.json"]).status.code(), Some(1));
    assert_eq!(csknot(&["invariant"]).status.code(), Some(1));
    assert_eq!(csknot(&["invariant", "--knot", "trefoil", "--order", "3"]).status.code(), Some(2));
    assert_eq!(csknot(&["invariant", "--knot", "trefoil", "--samples", "0"]).status.code(), Some(1));
    assert_eq!(csknot(&["invariant", "--knot", "trefoil", "--threads", "0"]).status.code(), Some(1));
}

#[test]
fn planar_circle_first_order() {
    let v = json(&csknot(&["invariant", "--knot", "circle", "--order", "1", "--unframed"]));
    assert_eq!(v["kind"], "z");
    assert!(v["coefficients"][1]["values"][0].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn invariant_is_reproducible() {
    let args = ["invariant", "--knot", "trefoil", "--order", "2", "--samples", "4000", "--seed", "17"];
    let a = csknot(&args);
    assert!(a.status.success());
    assert_eq!(csknot(&args).stdout, a.stdout);
    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    assert_eq!(csknot(&one).stdout, a.stdout);
    let v = json(&a);
    assert_eq!(v["provenance"]["seed"], 17);
    assert_eq!(v["provenance"]["samples"], 4000);
}

#[test]
fn saved_config_reproduces_the_run() {
    let d = scratch("config");
    let cfg = d.join("run.json");
    let out = d.join("out.json");
    let first = csknot(&[
        "invariant",
        "--knot",
        "trefoil",
        "--order",
        "2",
        "--samples",
        "3000",
        "--seed",
        "5",
        "--save-config",
        cfg.to_str().unwrap(),
    ]);
    assert!(first.status.success());
    let again = csknot(&["invariant", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first.stdout);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn knot_files_are_read() {
    let d = scratch("knot");
    let k = d.join("ring.json");
    std::fs::write(&k, r#"{"type": "circle", "radius": 1.5, "framing": {"type": "linking", "lk": 2}}"#).unwrap();
    let v = json(&csknot(&["invariant", "--knot", k.to_str().unwrap(), "--order", "1"]));
    assert_eq!(v["knot"]["name"], "ring");
    assert!((v["coefficients"][1]["values"][0].as_f64().unwrap() - 1.0).abs() < 1e-6);
    std::fs::write(&k, "{ not json").unwrap();
    assert_eq!(csknot(&["invariant", "--knot", k.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn verify_exit_codes() {
    let v = json(&csknot(&["verify", "algebra"]));
    assert_eq!(v["pass"], true);
    let d = scratch("verify");
    let cfg = d.join("strict.json");
    std::fs::write(&cfg, r#"{"tolerances": {"relative": -1.0}}"#).unwrap();
    let o = csknot(&["verify", "self-linking", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn anomaly_of_theta() {
    let v = json(&csknot(&["anomaly", "--degree", "1", "--samples", "2000"]));
    let e = &v["entries"][0];
    assert_eq!(e["degree"], 1);
    assert!((e["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}
