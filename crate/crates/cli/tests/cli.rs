use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn write_config(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hankeldet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], config: Option<&PathBuf>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hankeldet"));
    cmd.args(args);
    if let Some(c) = config {
        cmd.arg("--config").arg(c);
    }
    cmd.output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

const DEMO: &str = r#"{"phi1": {"exponents": [1.0], "coefficients": [1.0]},
                       "phi2": {"exponents": [1.0], "coefficients": [1.0]}}"#;

#[test]
fn single_exponential_demo_gives_three_quarters() {
    let cfg = write_config("demo.json", DEMO);
    let out = run(&["det"], Some(&cfg));
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["schema"], 1);
    let methods = j["methods"].as_array().unwrap();
    assert_eq!(methods.len(), 4);
    for m in methods {
        assert!((num(&m["value_re"]) - 0.75).abs() < 1e-8, "{m}");
    }
    for d in j["deviations"].as_array().unwrap() {
        assert!(num(&d["relative"]) < 1e-8);
    }
}

#[test]
fn shifted_demo_matches_closed_form() {
    // 1 − e^{−4x}/4 at x = 0.5
    let cfg = write_config("demo_x.json", &DEMO.replacen('{', r#"{"x": 0.5, "#, 1));
    let out = run(&["det"], Some(&cfg));
    assert_eq!(out.status.code(), Some(0));
    let want = 1.0 - (-2.0f64).exp() / 4.0;
    for m in json_of(&out)["methods"].as_array().unwrap() {
        assert!((num(&m["value_re"]) - want).abs() < 1e-8, "{m}");
    }
}

#[test]
fn sinh_kernel_identity_holds() {
    let cfg = write_config(
        "bc.json",
        r#"{"symbol": {"kind": "sinh_kernel", "params": {"gamma": 9.869604401089358}}}"#,
    );
    let out = run(&["det"], Some(&cfg));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json_of(&out);
    let devs = j["deviations"].as_array().unwrap();
    let lhs_rhs = devs.iter().find(|d| d["a"] == "lhs" && d["b"] == "rhs_nystrom").unwrap();
    assert!(num(&lhs_rhs["relative"]) < 1e-5);
    assert!(j["cauchy_binet_partial_sums"].as_array().unwrap().len() > 1);
}

#[test]
fn malformed_or_missing_config_is_a_usage_error() {
    let cfg = write_config("bad.json", r#"{"symbol": "#);
    assert_eq!(run(&["det"], Some(&cfg)).status.code(), Some(1));
    assert_eq!(run(&["det"], None).status.code(), Some(1));
    let cfg = write_config("unknown.json", r#"{"weight": {"kind": "laguerre"}, "n": 2, "extra": 1}"#);
    assert_eq!(run(&["moments"], Some(&cfg)).status.code(), Some(1));
    assert_eq!(run(&["verify", "--nodes", "4"], None).status.code(), Some(1));
    assert_eq!(run(&["bogus"], None).status.code(), Some(1));
}

#[test]
fn identity_symbol_factorizes_trivially() {
    let cfg = write_config("id.json", r#"{"symbol": {"kind": "custom", "params": {"name": "identity"}}}"#);
    let out = run(&["factorize"], Some(&cfg));
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["winding"], 0);
    assert_eq!(num(&j["reconstruction_residual"]), 0.0);
}

#[test]
fn gamma_quotient_factorizes_within_tolerance() {
    let cfg = write_config(
        "gq.json",
        r#"{"symbol": {"kind": "gamma_quotient",
                       "params": {"a": [0.3, 0.7], "b": [0.4, 0.6], "c": [0.3, 0.7], "d": [0.4, 0.6]}}}"#,
    );
    let out = run(&["factorize", "--tol", "1e-8"], Some(&cfg));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json_of(&out);
    assert!(num(&j["reconstruction_residual"]) < 1e-8);
    assert_eq!(j["winding"], 0);
}

#[test]
fn hypothesis_violations_exit_with_two() {
    let zero = write_config(
        "zero.json",
        r#"{"symbol": {"kind": "custom", "params": {"name": "rational", "zeros": [0.0], "poles": [-2.0]}}}"#,
    );
    let out = run(&["factorize"], Some(&zero));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
    // (z − 1)/(z + 1) winds once around the origin along the axis
    let wind = write_config(
        "wind.json",
        r#"{"symbol": {"kind": "custom", "params": {"name": "rational", "zeros": [1.0], "poles": [-1.0]}}}"#,
    );
    assert_eq!(run(&["factorize"], Some(&wind)).status.code(), Some(2));
    let unbalanced = write_config("m1.json", r#"{"a": [0.3], "b": [0.5], "c": [0.4], "d": [0.2]}"#);
    assert_eq!(run(&["barnes"], Some(&unbalanced)).status.code(), Some(2));
}

#[test]
fn verify_subset_passes() {
    let out = run(&["verify", "--only", "equilibrium"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json_of(&out);
    assert_eq!(j["passed"], true);
    let ids: Vec<u64> = j["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![9]);
}

#[test]
fn tightened_tolerance_names_the_failures() {
    let out = run(&["verify", "--only", "equilibrium", "--tol", "1e-14"], None);
    assert_eq!(out.status.code(), Some(4));
    let j = json_of(&out);
    assert_eq!(j["passed"], false);
    let failing: Vec<&str> = j["failing"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(!failing.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    for name in failing {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn only_is_rejected_outside_verify() {
    let cfg = write_config("st_only.json", r#"{"n": 2, "t": 0.5}"#);
    assert_eq!(run(&["struve", "--only", "equilibrium"], Some(&cfg)).status.code(), Some(1));
}

#[test]
fn output_is_deterministic_and_records_settings() {
    let cfg = write_config(
        "ortho.json",
        r#"{"weight": {"kind": "jacobi", "alpha": 0.5, "beta": 0.0}, "n": 4,
            "statistic": {"kind": "step", "t": 0.5, "height": 0.2}}"#,
    );
    let args = ["ortho", "--tol", "1e-6", "--nodes", "64"];
    let a = run(&args, Some(&cfg));
    let b = run(&args, Some(&cfg));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let j = json_of(&a);
    assert_eq!(j["nodes"], 64);
    assert_eq!(num(&j["tol"]), 1e-6);
    assert!((num(&j["hankel_det"]) / num(&j["norm_product"]) - 1.0).abs() < 1e-8);
    assert!((num(&j["kernel_trace"]) - 4.0).abs() < 1e-8);
    let demo = write_config("demo2.json", DEMO);
    assert_eq!(run(&["det"], Some(&demo)).stdout, run(&["det"], Some(&demo)).stdout);
}

#[test]
fn every_command_records_schema_and_settings() {
    let cases = [
        ("moments", r#"{"weight": {"kind": "laguerre"}, "n": 3}"#),
        ("struve", r#"{"n": 2, "t": 0.5}"#),
        ("barnes", r#"{"a": [0.3, 0.7], "b": [0.4, 0.6], "c": [0.3, 0.7], "d": [0.4, 0.6], "k_terms": 8, "x": [1.5]}"#),
        ("equilibrium", r#"{"potential": {"kind": "polynomial", "coeffs": [0, 0, 2]}, "step_t": [0.5]}"#),
    ];
    for (cmd, body) in cases {
        let cfg = write_config(&format!("{cmd}.json"), body);
        let out = run(&[cmd, "--nodes", "32"], Some(&cfg));
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        let j = json_of(&out);
        assert_eq!(j["schema"], 1);
        assert_eq!(j["command"], cmd);
        assert_eq!(j["nodes"], 32);
        assert_eq!(num(&j["tol"]), 1e-8);
    }
}

#[test]
fn csv_output_for_moments_and_density() {
    let dir = std::env::temp_dir().join(format!("hankeldet-cli-{}", std::process::id()));
    let cfg = write_config("mcsv.json", r#"{"weight": {"kind": "laguerre"}, "n": 4}"#);
    let path = dir.join("moments.csv");
    let out = run(&["moments", "--output", path.to_str().unwrap()], Some(&cfg));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,mu");
    // μ_3 = 3! for e^{−x}
    assert_eq!(lines[4].split(',').nth(1).unwrap().parse::<f64>().unwrap(), 6.0);
    let cfg = write_config("ecsv.json", r#"{"potential": {"kind": "zero"}, "samples": 11}"#);
    let path = dir.join("density.csv");
    assert_eq!(run(&["equilibrium", "--output", path.to_str().unwrap()], Some(&cfg)).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 12);
}
