use std::process::{Command, Output};

use normcross::laurent::LaurentDist;
use normcross::weyl::WeylOp;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normcross"))
        .args(args)
        .env_remove("NORMCROSS_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn expand_text_and_json() {
    let o = run(&["expand", "-n", "2", "-J", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("u_-2 = 2 d(x1) d(x2)\n"));

    let v = json(&["expand", "-n", "1", "-J", "1"]);
    let keys: Vec<&String> = v["coeffs"].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 3);
    for k in ["-1", "0", "1"] {
        assert!(v["coeffs"].get(k).is_some());
    }
    let parsed: LaurentDist = serde_json::from_value(v).unwrap();
    assert_eq!(parsed, normcross::laurent::expand_product(1, 1).unwrap());
}

#[test]
fn unicode_flag() {
    let o = run(&["expand", "-n", "1", "-J", "0", "--unicode"]);
    assert!(stdout(&o).contains("δ(x1)"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["expand", "-n", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "-n", "2", "-k", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["generators", "-n", "2", "-k", "0", "-m", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["divide", "x1 y2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn verify_and_complete() {
    assert_eq!(
        run(&["verify", "-n", "3", "-k", "1"]).status.code(),
        Some(0)
    );
    let o = run(&["verify", "-n", "2", "-k", "1", "--complete", "-d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("span rank"));
    let v = json(&["complete", "-n", "2", "-k", "0", "-d", "2"]);
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn zeta_leading_coefficients() {
    for (n, lead) in [("1", 1.0), ("2", 2.0), ("3", 4.0)] {
        let v = json(&["zeta", "-n", n, "--tol", "1e-6", "--radius", "0.25"]);
        assert_eq!(v["passed"], Value::Bool(true));
        let c = v["degrees"][0]["fitted"].as_f64().unwrap();
        assert!((c - lead).abs() < 1e-6, "n={n}: {c}");
    }
}

#[test]
fn zeta_csv_dump() {
    let path = std::env::temp_dir().join(format!("normcross-zeta-{}.csv", std::process::id()));
    let o = run(&["zeta", "-n", "1", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn tolerance_failure_exits_1() {
    // no fit reaches 1e-15 in double precision
    let o = run(&["zeta", "-n", "2", "--tol", "1e-15", "--radius", "0.9"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn divide_round_trips() {
    let v = json(&["divide", "x1 d1 x2 d2"]);
    let q: Vec<WeylOp> = serde_json::from_value(v["quotients"].clone()).unwrap();
    let r: WeylOp = serde_json::from_value(v["remainder"].clone()).unwrap();
    assert_eq!(q[0].to_string(), "x2 d2");
    assert_eq!(q[1].to_string(), "-1");
    assert_eq!(r.to_string(), "1");
}

#[test]
fn json_is_deterministic() {
    let args = [
        "crosscheck",
        "-n",
        "2",
        "--trials",
        "4",
        "--seed",
        "3",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn format_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_normcross"))
        .args(["generators", "-n", "2", "-k", "1"])
        .env("NORMCROSS_FORMAT", "json")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["generators"][0]["label"], "subset-product");
}
