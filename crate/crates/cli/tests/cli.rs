use std::process::{Command, Output};

fn finring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finring")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn construct_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.json");
    let path = path.to_str().unwrap();
    let out = finring(&["construct", "--family", "odd", "--p", "3", "--lambda", "1", "--partition", "2,1", "--out", path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("C2 x C9 x C3"));

    let out = finring(&["--json", "analyze", path]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["unit_group_type"], "C2 x C9 x C3");
    assert_eq!(report["ring_order"], 81);
    assert_eq!(report["is_local"], true);
}

#[test]
fn construct_sizes() {
    let dir = tempfile::tempdir().unwrap();
    for (args, order) in [
        (vec!["--family", "galois", "--p", "3", "--m", "2", "--lambda", "2"], 81),
        (vec!["--family", "example-p", "--p", "3"], 6561),
    ] {
        let path = dir.path().join("r.json");
        let mut full = vec!["--json", "construct"];
        full.extend(args);
        full.extend(["--out", path.to_str().unwrap()]);
        let out = finring(&full);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["ring_order"], order);
    }
}

#[test]
fn analyze_products_and_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z12.json");
    let path = path.to_str().unwrap();
    assert_eq!(finring(&["construct", "--family", "zn", "--n", "12", "--out", path]).status.code(), Some(0));
    let report = json(&finring(&["--json", "analyze", path]));
    assert_eq!(report["unit_group_type"], "C2^2");
    assert_eq!(report["local_factor_reports"].as_array().unwrap().len(), 2);

    assert_eq!(finring(&["construct", "--family", "zn", "--n", "4", "--out", path]).status.code(), Some(0));
    let report = json(&finring(&["--json", "analyze", path]));
    assert_eq!(report["unit_group_type"], "C2");
    assert_eq!((report["k"].as_u64(), report["residue"]["lambda"].as_u64()), (Some(1), Some(1)));

    assert_eq!(finring(&["construct", "--family", "example-2", "--a0", "3", "--out", path]).status.code(), Some(0));
    let report = json(&finring(&["--json", "analyze", path]));
    assert_eq!(report["unit_group_type"], "C8 x C4^2 x C2^3 x C3");
}

#[test]
fn verify_passes() {
    for args in [
        vec!["verify", "--family", "two", "--lambda", "2", "--a0", "3", "--partition", ""],
        vec!["verify", "--family", "odd", "--p", "3", "--lambda", "2", "--partition", "1,1"],
        vec!["verify", "--family", "example-p", "--p", "3"],
    ] {
        let out = finring(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(stdout(&out).contains("PASS"));
    }
}

#[test]
fn tables() {
    let out = finring(&["--json", "cyclic-table", "20"]);
    let ns: Vec<u64> = json(&out).as_array().unwrap().iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![1, 2, 3, 4, 6, 7, 8, 10, 12, 14, 15, 16, 18, 20]);

    let out = finring(&["--json", "ditor-table", "30"]);
    let ns: Vec<u64> = json(&out).as_array().unwrap().iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert!(ns.contains(&24));
    for n in [5, 11, 13] {
        assert!(!ns.contains(&n));
    }

    let out = finring(&["--json", "ditor-table", "--odd", "63"]);
    let ns: Vec<u64> = json(&out).as_array().unwrap().iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![1, 3, 7, 9, 15, 21, 27, 31, 45, 49, 63]);

    assert_eq!(stdout(&finring(&["cyclic-table", "50"])), stdout(&finring(&["cyclic-table", "50"])));
}

#[test]
fn lemma_checks() {
    assert_eq!(finring(&["lemma-check", "--p", "3", "--lambda", "2", "--a0", "3"]).status.code(), Some(0));
    assert_eq!(finring(&["lemma-check", "--p", "2", "--depth", "2", "--lambda", "2", "--a0", "4"]).status.code(), Some(0));
    let out = finring(&["--json", "lemma-check", "--p", "2", "--depth", "1", "--a0", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let last = report["rings"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["ring"], "Z/2^3");
    assert_eq!(last["counterexample"]["mu"], serde_json::json!([2]));
}

#[test]
fn realize_commands() {
    let out = finring(&["--json", "realize-group", "C8 x C3^4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "Realizable");
    assert_eq!(v["witness"]["family"], "odd");

    let v = json(&finring(&["--json", "realize-group", "C32"]));
    assert_eq!(v["status"], "NotRealizable");
    assert!(v["reason"]["condition"].is_string());

    let v = json(&finring(&["--json", "realize-cardinality", "5"]));
    assert_eq!(v["status"], "NotRealizable");
    let v = json(&finring(&["--json", "realize-cardinality", "24"]));
    assert_eq!(v["status"], "Realizable");
}

#[test]
fn exit_codes() {
    assert_eq!(finring(&["realize-group", "C6 x"]).status.code(), Some(2));
    assert_eq!(finring(&["verify", "--family", "odd", "--p", "2"]).status.code(), Some(2));
    assert_eq!(finring(&["verify", "--family", "galois", "--p", "3"]).status.code(), Some(2));
    assert_eq!(finring(&["analyze", "/nonexistent/ring.json"]).status.code(), Some(2));
    assert_eq!(finring(&["--cap", "100", "realize-group", "C128"]).status.code(), Some(3));
    assert_eq!(finring(&["--cap", "1000", "verify", "--family", "example-p", "--p", "3"]).status.code(), Some(3));
    assert_eq!(finring(&["bogus"]).status.code(), Some(2));
}
