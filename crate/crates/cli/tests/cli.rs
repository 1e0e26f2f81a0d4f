use std::fs;
use std::process::{Command, Output};

fn tba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tba")).args(args).output().expect("spawn tba")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn countermodel_round_trips_through_consequence() {
    let found = tba(&["search", "-s", "p |- box p", "--max-points", "2", "--format", "json"]);
    assert_eq!(code(&found), 1, "{}", String::from_utf8_lossy(&found.stderr));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cm.json");
    fs::write(&path, &found.stdout).unwrap();
    let path = path.to_str().unwrap();
    let again = tba(&["consequence", "-m", path, "-s", "p |- box p"]);
    assert_eq!(code(&again), 1);
}

#[test]
fn text_countermodel_is_also_loadable() {
    let found = tba(&["search", "-f", "p -> box p"]);
    assert_eq!(code(&found), 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cm.json");
    fs::write(&path, &found.stdout).unwrap();
    let v = tba(&["valid", "-m", path.to_str().unwrap(), "-f", "p -> box p"]);
    assert_eq!(code(&v), 1);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["search", "-f", "-p | dia p", "--max-points", "2", "--format", "json"][..],
        &["cube", "--points", "2", "--seed", "9", "--samples", "50", "--format", "json"][..],
        &["report", "paper-suite", "--only", "3,6,9", "--format", "json"][..],
    ] {
        let a = tba(args);
        let b = tba(args);
        assert!(a.status.success() || code(&a) == 1, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    // Valid under topological assumptions.
    let ok = tba(&["search", "-f", "box p -> p", "--assume", "I:CNTR", "--max-points", "2"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    // Relational search cannot certify validity.
    let inc = tba(&["search", "-f", "box (p & q) <-> box p & box q", "--strategy", "relational", "--max-points", "2"]);
    assert_eq!(code(&inc), 3);
    // Syntax errors are usage errors.
    let bad = tba(&["search", "-f", "p &&"]);
    assert_eq!(code(&bad), 2);
    assert!(!bad.stderr.is_empty());
    let missing = tba(&["eval", "-m", "/nonexistent/model.json", "-f", "p"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn check_conditions_reports_failures() {
    let topo = tba(&["check-conditions", "-t", "0,3,2,3", "-n", "2", "-c", "MONO,EXPN,IDEM,NORM,ADDI"]);
    assert_eq!(code(&topo), 0, "{}", String::from_utf8_lossy(&topo.stdout));
    let identity = tba(&["check-conditions", "-t", "0,1,2,3", "-n", "2", "-c", "ANTI"]);
    assert_eq!(code(&identity), 1);
    assert!(String::from_utf8_lossy(&identity.stdout).contains("witness"));
}

#[test]
fn eval_in_a_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(
        &path,
        r#"{"points":2,"primitive":"closure","operator":{"points":2,"table":[0,3,2,3]},"valuation":{"p":[0]}}"#,
    )
    .unwrap();
    let o = tba(&["eval", "-m", path.to_str().unwrap(), "-f", "dia p", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], serde_json::json!([0, 1]));
}

#[test]
fn cube_and_roundtrip_commands() {
    let c = tba(&["cube", "--points", "2", "--exhaustive"]);
    assert_eq!(code(&c), 0);
    assert!(String::from_utf8_lossy(&c.stdout).starts_with("256/256 operators pass"));
    let r = tba(&["topology-roundtrip", "-n", "3"]);
    assert_eq!(code(&r), 0);
    assert!(String::from_utf8_lossy(&r.stdout).contains("29 topologies, 0 failures"));
}

#[test]
fn gentle_explosion_and_sierpinski_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(
        &path,
        r#"{"points":2,"primitive":"closure","operator":{"points":2,"table":[0,3,2,3]},"valuation":{}}"#,
    )
    .unwrap();
    let o = tba(&["consequence", "-m", path.to_str().unwrap(), "-s", "cons p, p, negC p |- F"]);
    assert_eq!(code(&o), 0);

    let s = tba(&["search", "-f", "p | negI p", "--assume", "I:MULT,CNTR,DNRM,IDEM", "--max-points", "2"]);
    assert_eq!(code(&s), 1);
    let m: serde_json::Value = serde_json::from_slice(&s.stdout).unwrap();
    assert_eq!(m["points"], 2);
    assert_eq!(m["operator"]["table"], serde_json::json!([0, 3, 2, 3]));
}
