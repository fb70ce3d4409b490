use std::process::{Command, Output};

fn bsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsq"))
        .args(args)
        .env("BSQ_THREADS", "2")
        .output()
        .expect("bsq runs")
}

#[test]
fn certify_bellman_main_passes() {
    let out = bsq(&["certify-bellman", "--kind", "main", "--c", "2", "--samples", "100000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["samples"], 100000);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_dyadic_lower160_passes() {
    let out = bsq(&["verify-dyadic", "--which", "lower160", "--depth", "10", "--instances", "100", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bsq(&[]).status.code(), Some(2));
    assert_eq!(bsq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bsq(&["geom-lemma", "--trials", "ten"]).status.code(), Some(2));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_bsq"))
        .args(["ap-probe"])
        .env("BSQ_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert_eq!(bsq(&["--help"]).status.code(), Some(0));
    assert_eq!(bsq(&["--version"]).status.code(), Some(0));
}

#[test]
fn violation_exits_one() {
    // starting the time grid at t = 0.5 drops most of the energy of a unit bump
    let out = bsq(&[
        "lp-heat", "--L", "8", "--h", "0.0625", "--t-min", "0.5", "--t-max", "2", "--betas", "0", "--bumps", "1:0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["checks"][0]["name"], "bump_1_0_energy_identity");
    assert_eq!(v["checks"][0]["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL bump_1_0_energy_identity"));
}

#[test]
fn invalid_parameters_exit_two() {
    assert_eq!(bsq(&["certify-bellman", "--kind", "alt", "--c", "0.5", "--samples", "10"]).status.code(), Some(2));
    assert_eq!(bsq(&["certify-bellman", "--kind", "main", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(bsq(&["verify-dyadic", "--which", "upper-ar", "--r", "2.5"]).status.code(), Some(2));
}

#[test]
fn csv_has_documented_columns() {
    let out = bsq(&["geom-lemma", "--trials", "1000", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,name,lhs,rhs,margin,sigma,pass"));
    assert!(lines.all(|l| l.starts_with("geom-lemma,") && l.ends_with(",true")));
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = std::env::temp_dir().join(format!("bsq-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let args = ["search-extremizer", "--which", "upper128", "--depth", "4", "--budget", "100"];
    let direct = bsq(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(bsq(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
