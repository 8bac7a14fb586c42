use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sailkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sailkit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quad_cf_example() {
    let o = sailkit(&["quad", "--d", "19", "cf"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[4; 2,1,3,1,2,8]");
}

#[test]
fn cubic_verify_json() {
    let o = sailkit(&["cubic", "--a", "1", "verify", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["iota"], 5);
    assert_eq!(v["pass"], true);
}

#[test]
fn family_zero_verify() {
    let o = sailkit(&["family", "--n", "0", "verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass, iota = 3"));
}

#[test]
fn quad_indecomposables_agree() {
    let cf: Value = serde_json::from_slice(&sailkit(&["quad", "--d", "13", "indecomposables", "--json"]).stdout).unwrap();
    let bf: Value = serde_json::from_slice(&sailkit(&["quad", "--d", "13", "indecomposables", "--strategy", "bruteforce", "--json"]).stdout).unwrap();
    assert_eq!(cf["iota"], bf["iota"]);
    assert_eq!(cf["method"], "continued_fraction");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sailkit(&["quad", "--d", "19"]).status.code(), Some(2));
    assert_eq!(sailkit(&["nonsense"]).status.code(), Some(2));
    let o = sailkit(&["quad", "--d", "12", "cf", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "NonSquarefree");
    assert_eq!(e["exit_code"], 2);
}

#[test]
fn resource_cap_exits_three() {
    let o = sailkit(&["quad", "--d", "94", "indecomposables", "--strategy", "bruteforce", "--cap", "1000", "--json"]);
    assert_eq!(o.status.code(), Some(3));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "BoxTooLarge");
}

#[test]
fn geometry_on_polytope_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a2.json");
    fs::write(&p, r#"{"field":{"kind":"simplest_cubic","a":1},"vertices":[["1","0","0"],["0","0","1"],["-2","-7","3"]]}"#).unwrap();
    let p = p.to_str().unwrap();
    assert_eq!(stdout(&sailkit(&["geometry", "iv", p])).trim(), "7");
    assert_eq!(stdout(&sailkit(&["geometry", "id", p])).trim(), "1");
    assert_eq!(sailkit(&["geometry", "certify", p]).status.code(), Some(0));
    let pts: Value = serde_json::from_slice(&sailkit(&["geometry", "points", p, "--json"]).stdout).unwrap();
    assert_eq!(pts["elements"].as_array().unwrap().len(), 6);
    let q = dir.path().join("a1.json");
    fs::write(&q, r#"{"field":{"kind":"simplest_cubic","a":1},"vertices":[["1","0","0"],["0","0","1"],["1","2","1"]]}"#).unwrap();
    let o = sailkit(&["geometry", "certify", q.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified"], false);
}

#[test]
fn scan_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(sailkit(&["scan", "biquad", "--max", "15", "--jobs", "1", "-o", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(sailkit(&["scan", "biquad", "--max", "15", "--jobs", "4", "-o", b.to_str().unwrap()]).status.code(), Some(0));
    let (a, b) = (fs::read_to_string(a).unwrap(), fs::read_to_string(b).unwrap());
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("d1,d2,d3,case,norms,sgnrk,u,r_cls_min,r_min,status"));
    assert_eq!(lines.next(), Some("2,3,6,1.iii,1;1;1,3,4,1,1,ok"));
}

#[test]
fn scan_cubic_rows() {
    let o = sailkit(&["scan", "cubic", "--max", "2", "--jobs", "2"]);
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("-1,2,1,1,1,2,2,true,ok"));
    assert!(rows[3].starts_with("1,2,1,1,7,5,5,true,ok"));
}

#[test]
fn dump_sail_polylines() {
    let o = sailkit(&["dump-sail", "--d", "7"]);
    let s = stdout(&o);
    let faces: Vec<&str> = s.split("\n\n").collect();
    assert_eq!(faces.len(), 2);
    assert_eq!(faces[0].lines().next(), Some("1 1"));
    for line in s.lines().filter(|l| !l.is_empty()) {
        let xy: Vec<f64> = line.split(' ').map(|t| t.parse().unwrap()).collect();
        assert!(xy.len() == 2 && xy[0] > 0.0 && xy[1] > 0.0);
    }
}

#[test]
fn bounds_kitaoka() {
    let v: Value = serde_json::from_slice(&sailkit(&["bounds", "--override-c12", "--json"]).stdout).unwrap();
    assert_eq!(v["kitaoka"]["max_u"], 131);
    assert_eq!(v["kitaoka"]["sqrt_d_bound"], 133);
}

#[test]
fn biquad_outputs() {
    let v: Value = serde_json::from_slice(&sailkit(&["biquad", "--d1", "5", "--d2", "3", "units", "--json"]).stdout).unwrap();
    assert_eq!(v["signature_rank"], 3);
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    let b: Value = serde_json::from_slice(&sailkit(&["biquad", "--d1", "2", "--d2", "7", "usr-bound", "--json"]).stdout).unwrap();
    assert_eq!(b["status"], "not_applicable");
}
