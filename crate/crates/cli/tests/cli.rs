use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SQRT6: &str = r#"{"n":2,"F":"Y - X1*X2","F_i":["X1^2 - 2","X2^2 - 3"]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extroot"))
        .args(args)
        .env_remove("EXTROOT_PREC_CEILING")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_sqrt6_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", SQRT6);
    for mode in ["adaptive", "max"] {
        let o = run(&["solve", "--system", &sys, "--mode", mode]);
        assert!(o.status.success());
        let v = json(&o);
        assert_eq!(v["schema"], "extroot/1");
        assert_eq!(v["report"]["entries"].as_array().unwrap().len(), 4);
        assert_eq!(v["report"]["total_mult"], 4);

        let rep = write(dir.path(), "rep.json", std::str::from_utf8(&o.stdout).unwrap());
        let o = run(&["verify", "--report", &rep]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(json(&o)["verdict"], "pass");
    }
}

#[test]
fn tampered_report_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", r#"{"n":1,"F":"(Y - X1)^2*(Y + 1)","F_i":["X1^2 - 2"]}"#);
    let o = run(&["solve", "--system", &sys]);
    let mut v = json(&o);
    let roots = v["report"]["entries"][0]["roots"].as_array_mut().unwrap();
    let m = roots[0]["multiplicity"].as_u64().unwrap();
    roots[0]["multiplicity"] = (m + 1).into();
    let rep = write(dir.path(), "bad.json", &v.to_string());
    let o = run(&["verify", "--report", &rep]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["verdict"], "fail");
}

#[test]
fn solve_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", SQRT6);
    for mode in ["adaptive", "max"] {
        let a = run(&["solve", "--system", &sys, "--mode", mode]).stdout;
        let b = run(&["solve", "--system", &sys, "--mode", mode, "--threads", "1"]).stdout;
        assert_eq!(a, b);
    }
}

#[test]
fn sqrtsum_verdicts() {
    let v = json(&run(&["sqrtsum", "--a", "1,4", "--b", "9,0"]));
    assert_eq!(v["verdict"], "Equal");
    let v = json(&run(&["sqrtsum", "--a", "2,3", "--b", "1,5"]));
    assert_eq!(v["verdict"], "Less");
    assert!(v["bits_used"].as_u64().unwrap() >= 64);
    assert!(v["threshold_G"].is_u64());
}

#[test]
fn bounds_example() {
    let v = json(&run(&["bounds", "--n", "2", "--M", "2", "--L", "1", "--delta", "1", "--sigma", "1"]));
    assert_eq!(v["L_star"], 44);
    assert_eq!(v["U"], 11);
    let v = json(&run(&["bounds", "--n", "1", "--M", "1", "--L", "1", "--delta", "1", "--sigma", "1", "--tau", "2"]));
    assert_eq!(v["L_star"], 10);
    assert_eq!(v["G"], 10);
}

#[test]
fn count_roots_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", r#"{"n":1,"F":"(Y - X1)^2*(Y - 1)","F_i":["X1^2 - 1"]}"#);
    let v = json(&run(&["count-roots", "--system", &sys]));
    let got: Vec<(u64, u64)> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["degree"].as_u64().unwrap(), p["distinct"].as_u64().unwrap()))
        .collect();
    // x = -1: (Y+1)^2 (Y-1); x = 1: (Y-1)^3
    assert_eq!(got, vec![(3, 2), (3, 1)]);
    let v = json(&run(&["eval", "--system", &sys, "--target", "40"]));
    assert_eq!(v["points"][0]["coefficients"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n":1,"F":"Y^ + 1","F_i":["X1"]}"#);
    let o = run(&["solve", "--system", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1") && err.contains("column"), "{err}");

    let sys = write(dir.path(), "sys.json", SQRT6);
    let o = run(&["--prec-ceiling", "64", "solve", "--system", &sys, "--mode", "max"]);
    assert_eq!(o.status.code(), Some(2));

    let o = Command::new(env!("CARGO_BIN_EXE_extroot"))
        .args(["solve", "--system", &sys, "--mode", "max"])
        .env("EXTROOT_PREC_CEILING", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["solve", "--system", "/nonexistent/sys.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn diagnostics_and_timing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", SQRT6);
    let v = json(&run(&["solve", "--system", &sys, "--diagnostics", "--timing"]));
    assert!(v["report"]["diagnostics"]["lsep_sum"].is_string());
    assert!(v["timing"]["seconds"].is_f64());
    let v = json(&run(&["solve", "--system", &sys]));
    assert!(v.get("timing").is_none());
}
