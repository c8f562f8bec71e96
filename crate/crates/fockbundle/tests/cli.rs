use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fockbundle"));
    c.env_remove("FOCKBUNDLE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn find<'a>(report: &'a serde_json::Value, suite: &str, theta: f64, name: &str) -> &'a serde_json::Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["suite"] == suite && c["theta"] == theta && c["name"] == name)
        .unwrap_or_else(|| panic!("{suite} {theta} {name}"))
}

#[test]
fn charts_both_signs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["verify", "--suite", "charts", "--theta", "1", "--theta", "-1", "--nmax", "48", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["config"]["theta_list"], serde_json::json!([1.0, -1.0]));
    // chart I loses slot2 |0> only for θ <= 0; chart II loses slot1 |0> for θ >= 0
    assert_eq!(find(&r, "charts", -1.0, "dirac_strings_V_I")["excluded_states"], serde_json::json!({"slot2": [0]}));
    assert_eq!(find(&r, "charts", 1.0, "dirac_strings_V_I")["excluded_states"], serde_json::json!({}));
    assert_eq!(find(&r, "charts", 1.0, "dirac_strings_V_II")["excluded_states"], serde_json::json!({"slot1": [0]}));
    assert_eq!(find(&r, "charts", -1.0, "dirac_strings_V_II")["excluded_states"], serde_json::json!({}));
}

#[test]
fn projector_string_at_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["verify", "--suite", "all", "--theta", "0", "--out", out.to_str().unwrap()]);
    let r = json(&out);
    let p = find(&r, "charts", 0.0, "dirac_strings_P_JC");
    assert_eq!(p["excluded_states"], serde_json::json!({"slot2": [0]}));
    assert_eq!(p["pass"], true);
    // the only failure at θ = 0 is the tensor breakdown, which vanishes off
    // the excluded states
    let failed: Vec<&str> = r["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed, vec!["tensor_breakdown"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(r["pass"], false);
}

#[test]
fn propagator_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["verify", "--suite", "propagator", "--theta", "0.5", "--g", "1", "--t", "3.14159", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&out);
    let c = find(&r, "propagator", 0.5, "propagator_vs_block_oracle");
    assert!(c["max_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &Path| {
        vec![
            "verify".to_string(),
            "--theta".into(),
            "0.5".into(),
            "--theta".into(),
            "-2".into(),
            "--nmax".into(),
            "16".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            p.to_str().unwrap().into(),
        ]
    };
    run(&args(&a).iter().map(String::as_str).collect::<Vec<_>>());
    let o = bin().args(args(&b)).env("FOCKBUNDLE_THREADS", "1").output().unwrap();
    assert!(o.status.code().is_some());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!std::fs::read_to_string(&a).unwrap().contains("elapsed_ms"));
}

#[test]
fn timings_opt_in() {
    let o = run(&["verify", "--suite", "fock", "--timings"]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r["checks"][0]["elapsed_ms"].as_f64().is_some());
}

#[test]
fn config_errors_exit_2() {
    for args in [
        vec!["verify", "--nmax", "3"],
        vec!["verify", "--tol", "0"],
        vec!["verify", "--tol", "-1e-3"],
        vec!["verify", "--omega", "1"],
        vec!["verify", "--omega", "1", "--delta", "2", "--theta", "3"],
        vec!["verify", "--suite", "nope"],
        vec!["verify", "--format", "xml"],
        vec!["sweep", "--axis", "t", "--values", "1", "--theta", "0", "--theta", "1"],
        vec!["sweep", "--axis", "nmax", "--values", "4.5"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = bin().args(["verify", "--suite", "fock"]).env("FOCKBUNDLE_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn physical_parameters_set_theta() {
    // θ = (delta - omega) / 2g = (3 - 2) / 2
    let o = run(&["verify", "--suite", "propagator", "--omega", "2", "--delta", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["config"]["theta_list"], serde_json::json!([0.5]));
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"full_evolution_factors_commute"));
}

#[test]
fn text_and_csv_formats() {
    let o = run(&["verify", "--suite", "fock", "--format", "text"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.lines().all(|l| l.starts_with("PASS") || l.starts_with("FAIL") || l.starts_with("    ")));
    assert!(s.contains("PASS fock") && s.contains("ccr"));
    let o = run(&["verify", "--suite", "fock", "--format", "csv"]);
    let s = String::from_utf8(o.stdout).unwrap();
    let mut r = csv::Reader::from_reader(s.as_bytes());
    assert_eq!(&r.headers().unwrap()[0], "suite");
    assert_eq!(r.records().count(), 6);
}

#[test]
fn sweeps() {
    let o = run(&["sweep", "--suite", "propagator", "--axis", "t", "--values", "0,1.5,3", "--theta", "0", "--nmax", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    let mut r = csv::Reader::from_reader(s.as_bytes());
    let h = r.headers().unwrap().clone();
    assert_eq!(&h[0], "t");
    let col = h.iter().position(|x| x == "propagator.u11_00_re").unwrap();
    let vals: Vec<f64> = r.records().map(|x| x.unwrap()[col].parse().unwrap()).collect();
    for (t, v) in [0.0f64, 1.5, 3.0].iter().zip(vals) {
        assert!((t.cos() - v).abs() < 1e-14);
    }

    let o = run(&["sweep", "--suite", "charts", "--axis", "theta", "--values=-1,0,1", "--nmax", "8"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s.lines().count(), 4);
    assert!(s.starts_with("theta,pass,"));
}
