use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn edes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn exponents_at_rounded_two_thirds() {
    let o = edes(&["exponents", "--n", "3", "--k", "0.6667"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let r = &v["report"];
    assert!((f(&r["p0"]) - 2.7863).abs() < 1e-4);
    assert!((f(&r["p1"]) - 3.0).abs() < 1e-12);
    assert!((f(&r["thresholds"]["n_k_variant"]) - 3.5).abs() < 1e-12);
    assert!((f(&v["input"]["k_input"]) - 0.6667).abs() < 1e-15);
    assert_eq!(r["dimension_case"], "between_n_tilde_and_n");
}

#[test]
fn exponents_real_dimension_and_p() {
    let v = json(&edes(&[
        "exponents",
        "--real-n",
        "2.5",
        "--k",
        "0.2",
        "--p",
        "2",
    ]));
    assert!((f(&v["input"]["n"]) - 2.5).abs() < 1e-15);
    assert!(v["report"]["classification"].is_object());
}

#[test]
fn floats_carry_seventeen_digits() {
    let o = edes(&["exponents", "--n", "3", "--k", "0.5"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"p1\"")).unwrap();
    let digits: String = line
        .split(':')
        .nth(1)
        .unwrap()
        .split('e')
        .next()
        .unwrap()
        .chars()
        .filter(char::is_ascii_digit)
        .collect();
    assert_eq!(digits.len(), 17, "{line}");
}

#[test]
fn kernels_check_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = edes(&["kernels", "--check", "--k", "0.6667", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["passed"], true);
    let csv = fs::read_to_string(dir.path().join("kernels.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().ends_with("rep_disagreement,pass"));
    assert!(lines.all(|l| l.ends_with(",true")));
}

#[test]
fn injected_fault_fails_with_status_two() {
    let o = edes(&["kernels", "--check", "--inject-fault", "--k", "0.3"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn iterate_emits_exact_sequences_and_thresholds() {
    let o = edes(&["iterate", "--p", "5/2", "--eps", "0.5,0.1", "--j-max", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    let alpha: Vec<&str> = entries[0]["trace"]["alpha"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_str().unwrap())
        .collect();
    assert_eq!(alpha, ["1", "7/2", "39/4", "203/8"]);
    assert!(f(&entries[1]["log_time"]) > f(&entries[0]["log_time"]));
    let o = edes(&[
        "iterate", "--p", "2", "--case", "p1", "--eps", "0.25", "--k", "0", "--n", "1",
    ]);
    assert_eq!(
        json(&o)["entries"][0]["trace"]["beta"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
}

#[test]
fn validation_errors_exit_one() {
    assert_eq!(code(&edes(&["exponents", "--k", "1.5"])), 1);
    assert_eq!(code(&edes(&["nonsense"])), 1);
    assert_eq!(code(&edes(&["exponents", "--bogus-flag"])), 1);
    assert_eq!(code(&edes(&["exponents", "--format", "svg"])), 1);
    assert_eq!(code(&edes(&["iterate", "--p", "1/0"])), 1);
    assert_eq!(
        code(&edes(&["simulate", "--config", "/nonexistent/config.json"])),
        1
    );
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    assert_eq!(
        code(&edes(&["exponents", "--out", file.to_str().unwrap()])),
        1
    );
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"params":{"k":0.5,"n":3},"p":2.0,"eps":0.2,"surprise":1}"#,
    )
    .unwrap();
    assert_eq!(
        code(&edes(&["simulate", "--config", cfg.to_str().unwrap()])),
        1
    );
}

fn write_config(path: &Path, extra: &str) {
    let text = format!(
        r#"{{"params":{{"k":0.5,"n":3}},"p":2.0,"eps":0.3,"data_profile":{{"kind":"bump","radius":1.0}},"r_max":12.0,"dr":0.02,"t_max":20.0{extra}}}"#
    );
    fs::write(path, text).unwrap();
}

#[test]
fn simulate_is_deterministic_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    write_config(&cfg, r#","cfl":0.40000000000000002"#);
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = edes(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((
            fs::read(out.join("simulate.csv")).unwrap(),
            fs::read(out.join("summary.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "t,max_u,U,curlyU,support_radius"
    );
    let summary: Value = serde_json::from_slice(&outputs[0].1).unwrap();
    for key in ["blew_up", "T_num", "uncertainty", "fitted_constants"] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }
    // the echo keeps the literal as written
    let text = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert!(text.contains("0.40000000000000002"));
}

#[test]
fn simulate_from_flags_with_plot() {
    let o = edes(&[
        "simulate", "--n", "1", "--k", "0", "--eps", "0.5", "--t-max", "200", "--format", "svg",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("<svg"));
}

#[test]
fn numerical_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("unstable.json");
    write_config(&cfg, r#","cfl":0.95"#);
    let o = edes(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_reports_slope_next_to_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    fs::write(
        &cfg,
        r#"{"base":{"params":{"k":0.0,"n":1},"p":2.0,"eps":0.5,"data_profile":{"kind":"bump","radius":1.0},"r_max":2300.0,"dr":0.02,"t_max":2000.0,"refine":false},"eps":[0.5,0.3,0.2,0.1,0.05]}"#,
    )
    .unwrap();
    let o = edes(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!((f(&v["predicted_exponent"]) - 1.0).abs() < 1e-12);
    assert!((f(&v["fitted_slope"]) - 1.0).abs() < 0.3);
    assert_eq!(v["monotone"], true);
    assert_eq!(v["runs"].as_array().unwrap().len(), 5);
    assert_eq!(v["config"]["eps"].as_array().unwrap().len(), 5);
    let again = edes(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn verify_all_quick_and_with_fault() {
    let dir = tempfile::tempdir().unwrap();
    let o = edes(&[
        "verify-all",
        "--profile",
        "quick",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let md = fs::read_to_string(dir.path().join("report.md")).unwrap();
    let summary = md.split("\n## ").next().unwrap();
    let rows: Vec<&str> = summary
        .lines()
        .filter(|l| l.starts_with("| ") && l.chars().nth(2).unwrap().is_ascii_digit())
        .collect();
    assert_eq!(rows.len(), 10);
    assert!(md.contains("18λ³"));
    assert!(md.contains("FAIL (known limitation)"));

    let o = edes(&["verify-all", "--profile", "quick", "--inject-fault"]);
    assert_eq!(code(&o), 2);
    let md = String::from_utf8(o.stdout).unwrap();
    let wronskian = md.lines().find(|l| l.starts_with("| 3 |")).unwrap();
    assert!(wronskian.contains("| FAIL |"), "{wronskian}");
    let identities = md.lines().find(|l| l.starts_with("| 1 |")).unwrap();
    assert!(identities.contains("| FAIL |"), "{identities}");
}
