use std::path::Path;
use std::process::{Command, Output};

use kimura_cli::config::parse_config;

fn kimura(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kimura"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("KIMURA_OUT_DIR")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn identities_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let ok = kimura(&["identities", "--alpha", "1.5", "--n-max", "10", "--tol", "1e-10"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("identities.csv")).unwrap();
    assert!(csv.starts_with("identity,alpha,n,closed_form,quadrature,abs_error\n"));
    assert!(csv.contains("f_closed[t=-0.5]"));
    assert!(!csv.contains('\r'));

    let strict = kimura(&["identities", "--alpha", "1.0,2.0", "--n-max", "6", "--tol", "1e-30"], dir.path());
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn identities_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["identities", "--alpha", "-1"],
        vec!["identities", "--alpha", "abc"],
        vec!["identities", "--tol", "0"],
        vec!["frobnicate"],
    ] {
        let out = kimura(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("usage"), "{args:?}");
    }
}

#[test]
fn solve_writes_summary_density_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"initial_condition": {"type": "delta", "x0": 0.3}, "times": [0.1, 1, 5], "output_grid": 11}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(kimura(&["solve", "--config", &cfg], &out).status.code(), Some(0));

    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next().unwrap(), "t,a,b,interior_mass,mass_residual,mean_residual,asymptotic_b");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!((r[1] + r[2] + r[3] - 1.0).abs() < 1e-12);
    }
    let want = 0.3 - 0.63 * (-10.0f64).exp();
    assert!((rows[2][6] - want).abs() < 1e-15);

    for t in ["0.1", "1", "5"] {
        let d = std::fs::read_to_string(out.join(format!("density_{t}.csv"))).unwrap();
        assert!(d.starts_with("x,r\n"));
        assert_eq!(d.lines().count(), 12);
    }

    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["coefficients"].as_array().unwrap().len(), 61);
    assert!(meta["diagnostics"]["projection_error"].is_null());
    let echoed = serde_json::to_string(&meta["config"]).unwrap();
    let original = std::fs::read_to_string(&cfg).unwrap();
    assert_eq!(parse_config(&echoed).unwrap(), parse_config(&original).unwrap());
}

#[test]
fn solve_smooth_and_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"initial_condition": {"type": "polynomial", "coefficients": [0, 6, -6]}, "times": []}"#,
    );
    assert_eq!(kimura(&["solve", "--config", &cfg], dir.path()).status.code(), Some(0));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary, "t,a,b,interior_mass,mass_residual,mean_residual,asymptotic_b\n");
}

#[test]
fn config_errors_exit_two_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"initial_condition": {"type": "delta", "x0": 0.3}, "times": [2, 1]}"#, "times[1]"),
        (r#"{"initial_condition": {"type": "delta"}, "times": []}"#, "initial_condition"),
        (r#"{"initial_condition": {"type": "delta", "x0": 0.3}, "times": [1], "truncation": -4}"#, "truncation"),
        (r#"{"initial_condition": {"type": "delta", "x0": 0.3}, "times": "soon"}"#, "times"),
    ];
    for (i, (text, field)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("bad{i}.json"), text);
        let out = kimura(&["solve", "--config", &cfg], dir.path());
        assert_eq!(out.status.code(), Some(2), "{text}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(field), "{stderr}");
    }
    let missing = kimura(&["solve", "--config", "/nonexistent/c.json"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn mass_far_from_one_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"initial_condition": {"type": "polynomial", "coefficients": [2]}, "times": [1]}"#,
    );
    assert_eq!(kimura(&["solve", "--config", &cfg], dir.path()).status.code(), Some(2));
}

#[test]
fn validate_mc_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"initial_condition": {"type": "delta", "x0": 0.3}, "times": [1, 2],
            "wf": {"population_size": 50, "replicates": 10000}}"#,
    );
    // no seed anywhere
    assert_eq!(kimura(&["validate-mc", "--config", &cfg], dir.path()).status.code(), Some(2));
    let out = kimura(&["validate-mc", "--config", &cfg, "--seed", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.path().join("mc_compare.csv")).unwrap();
    assert!(csv.starts_with("t,b_spectral,b_mc,mc_stderr,z_score\n"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn validate_mc_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let no_wf = write_config(dir.path(), "a.json", r#"{"initial_condition": {"type": "delta", "x0": 0.3}, "times": [1]}"#);
    assert_eq!(kimura(&["validate-mc", "--config", &no_wf], dir.path()).status.code(), Some(2));
    let few = write_config(
        dir.path(),
        "b.json",
        r#"{"initial_condition": {"type": "delta", "x0": 0.3}, "times": [1],
            "wf": {"population_size": 200, "replicates": 10, "seed": 1}}"#,
    );
    let out = kimura(&["validate-mc", "--config", &few], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wf.replicates"));
    let short = write_config(
        dir.path(),
        "c.json",
        r#"{"initial_condition": {"type": "delta", "x0": 0.3}, "times": [1],
            "wf": {"population_size": 200, "replicates": 10000, "seed": 1, "generations": 10}}"#,
    );
    assert_eq!(kimura(&["validate-mc", "--config", &short], dir.path()).status.code(), Some(2));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let status = Command::new(env!("CARGO_BIN_EXE_kimura"))
        .args(["identities", "--alpha", "2", "--n-max", "4"])
        .env("KIMURA_OUT_DIR", &target)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(target.join("identities.csv").exists());
}
