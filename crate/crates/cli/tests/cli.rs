use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use zerodyn::text::parse_poly_inline;

fn zerodyn() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zerodyn"));
    for var in ["ZERODYN_PRECISION", "ZERODYN_TOL", "ZERODYN_M_MAX", "ZERODYN_D_CAP", "ZERODYN_FORMAT", "ZERODYN_OUTPUT"] {
        cmd.env_remove(var);
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    zerodyn().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn classify_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.txt");
    fs::write(&path, "# zerodyn-series v1\n1\n1\n1\n").unwrap();
    let v = json(&["classify", "--series", path.to_str().unwrap()]);
    let r = &v["result"];
    assert_eq!(r["form"], "General");
    assert_eq!(r["p"], 2);
    assert_eq!(r["alpha"], "1");
    assert_eq!(r["beta"], "1/2");
    assert_eq!(v["format"], "zerodyn-report v1");
    assert_eq!(v["config"]["precision"], 256);
}

#[test]
fn iterate_with_count() {
    let v = json(&["iterate", "--series", "poly:1+x^2", "--poly", "x^3", "--m", "5", "--op-count", "nonreal"]);
    assert_eq!(v["result"]["poly"], "x^3+30x");
    assert_eq!(v["result"]["nonreal"], 2);
}

#[test]
fn jensen_roots_are_negative() {
    let v = json(&["jensen", "--p", "3", "--q", "2", "--roots"]);
    let coeffs: Vec<&str> = v["result"]["coefficients"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1", "1/3", "1/360"]);
    let roots = v["result"]["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert!(roots.iter().all(|r| r["re"].as_f64().unwrap() < 0.0 && r["im"].as_f64().unwrap() == 0.0));
}

#[test]
fn emitted_polynomials_reparse() {
    for args in [
        vec!["limit-poly", "--beta", "-3/7", "--p", "3", "--d", "9"],
        vec!["hermite", "--d", "11"],
        vec!["apply", "--series", "truncated-exp:6", "--poly", "x^6-1/2x"],
        vec!["jensen", "--series", "mittag-leffler:2:5", "--q", "5"],
    ] {
        let v = json(&args);
        let text = v["result"]["poly"].as_str().unwrap();
        let parsed = parse_poly_inline(text).unwrap();
        let coeffs: Vec<String> = parsed.coeffs().iter().map(|c| c.to_string()).collect();
        let emitted: Vec<String> = v["result"]["coefficients"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap().to_string())
            .collect();
        assert_eq!(coeffs, emitted, "{args:?}");
    }
}

#[test]
fn csv_output_is_versioned() {
    let out = run(&["onset", "--series", "poly:1-x^2", "--poly", "x^4", "--m-max", "6", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# zerodyn-csv v1");
    assert!(lines[1].contains("m_max=6"));
    assert_eq!(lines[2], "m,nonreal,all_real_simple");
    assert_eq!(lines[3], "1,0,false");
    assert_eq!(lines[4], "2,0,true");
    assert_eq!(lines.len(), 3 + 6);
}

#[test]
fn environment_overrides_defaults() {
    let out = zerodyn()
        .env("ZERODYN_PRECISION", "128")
        .env("ZERODYN_M_MAX", "7")
        .args(["onset", "--series", "poly:1+x+x^2", "--poly", "x^3+1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["precision"], 128);
    assert_eq!(v["result"]["trace"].as_array().unwrap().len(), 7);

    // flags win over the environment
    let out = zerodyn()
        .env("ZERODYN_M_MAX", "7")
        .args(["onset", "--series", "poly:1+x+x^2", "--poly", "x^3+1", "--m-max", "3"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["trace"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "--series", "poly:1+y"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--series", "/definitely/missing"]).status.code(), Some(2));
    assert_eq!(run(&["converge", "--series", "truncated-exp:5", "--poly", "x^2"]).status.code(), Some(2));
    assert_eq!(run(&["converge", "--series", "poly:1+x^2", "--poly", "2x^2"]).status.code(), Some(2));
    assert_eq!(run(&["hermite", "--d", "3", "--precision", "32"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let out = run(&["construct", "--series", "poly:1+x", "--n", "1", "--d-cap", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no degree witness"));
}

#[test]
fn construct_save_resume_verify() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.json");
    let out = run(&["construct", "--series", "poly:1+x+x^2", "--n", "1", "--output", one.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // extend the saved one-stage plan by editing in a second degree
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&one).unwrap()).unwrap();
    let plan = &mut doc["result"]["plan"];
    assert_eq!(plan["gammas"], serde_json::json!(["1"]));
    let full = json(&["construct", "--series", "poly:1+x+x^2", "--n", "2"]);
    plan["degrees"] = full["result"]["plan"]["degrees"].clone();
    plan["targets"] = full["result"]["plan"]["targets"].clone();
    fs::write(&one, serde_json::to_string(&doc).unwrap()).unwrap();

    let resumed = json(&["construct", "--series", "poly:1+x+x^2", "--resume", one.to_str().unwrap(), "--verify", "2"]);
    assert_eq!(resumed["result"]["plan"]["gammas"], full["result"]["plan"]["gammas"]);
    assert!(resumed["result"]["verification"]["disks"].as_array().unwrap().len() >= 3);

    let two = dir.path().join("two.json");
    fs::write(&two, serde_json::to_string(&resumed).unwrap()).unwrap();
    let v = json(&["verify-construct", "--series", "poly:1+x+x^2", "--plan", two.to_str().unwrap()]);
    assert_eq!(v["result"]["n"], 2);

    // a plan for a different operator fails verification
    let out = run(&["verify-construct", "--series", "poly:1+2x+x^2", "--plan", two.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn converge_and_discrepancy_reports() {
    let v = json(&["converge", "--series", "poly:1-x^2", "--poly", "x^4", "--m", "1,2,4,8"]);
    let errs: Vec<&str> = v["result"]["samples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["exact_error"].as_str().unwrap())
        .collect();
    assert_eq!(errs, ["12", "6", "3", "3/2"]);
    assert_eq!(v["result"]["limit_poly_text"], "x^4-12x^2+12");

    let v = json(&["discrepancy", "--series", "poly:1-x^2", "--d", "4", "--m", "100,400"]);
    let s = v["result"]["samples"].as_array().unwrap();
    assert_eq!(s[0]["exact"], "3/25");
    assert_eq!(s[1]["exact"], "3/100");
}

#[test]
fn zeros_of_iterate_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.csv");
    let out = run(&[
        "zeros", "--poly", "x^2", "--series", "poly:1+x-x^2", "--m", "3", "--format", "csv", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    // x^2 + 6x: zeros 0 and -6
    let mut res: Vec<f64> = text.lines().skip(3).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    res.sort_by(f64::total_cmp);
    assert_eq!(res.len(), 2);
    assert!((res[0] + 6.0).abs() < 1e-12 && res[1].abs() < 1e-12);
}

#[test]
fn poly_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "# zerodyn-poly v1\n0\n0\n0\n1\n").unwrap();
    let arg = format!("@{}", path.display());
    let v = json(&["iterate", "--series", "poly:1+x^2", "--poly", &arg, "--m", "2"]);
    assert_eq!(v["result"]["poly"], "x^3+12x");
}
