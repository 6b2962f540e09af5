//! The `filcol` binary end to end: outputs, exit codes and determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn filcol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filcol")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = filcol(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

const GRID_2X2: [&str; 12] =
    ["--theta-min", "-2", "--theta-max", "4", "--w-min", "-2", "--w-max", "2", "--n-theta", "2", "--n-w", "2"];

#[test]
fn gamma_star_prints_threshold_and_residual() {
    let v = json(&["gamma-star", "--alpha", "0.2"]);
    assert!((v["gamma_star"].as_f64().unwrap() - 1.219).abs() <= 1e-3);
    assert!(v["residual"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn classify_unit_ratio_receding() {
    let v = json(&["classify", "--alpha", "0.2", "--gamma", "1.0", "--theta0", "0", "--w0", "-1"]);
    assert_eq!(v["verdict"], "NoCollisionGamma1");
    assert!(v["collision_time"].is_null());
}

#[test]
fn classify_csv_row() {
    let out = filcol(&["classify", "--alpha", "0.5", "--gamma", "1", "--theta0", "0", "--w0", "0.5", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta0,w0,verdict,h0,t_estimate"));
    assert!(lines.next().unwrap().starts_with("0.0,0.5,HeadOnCollision,-1.0,"));
}

#[test]
fn simulate_unit_ratio_collides_at_the_exact_time() {
    let v = json(&["simulate", "--alpha", "0.5", "--gamma", "1", "--theta0", "1.3862944", "--w0", "1", "--format", "json"]);
    assert_eq!(v["outcome"]["kind"], "Collided");
    let t = v["outcome"]["time"].as_f64().unwrap();
    assert!((t - 1.0).abs() < 1e-6, "{t}");
    assert!(v["trajectory"].as_array().unwrap().len() > 10);
    assert!(v["drift"]["H"].as_f64().unwrap() < 1e-8);
}

#[test]
fn simulate_csv_trajectory_header() {
    let out = filcol(&["simulate", "--alpha", "0.2", "--gamma", "2", "--theta0", "0", "--w0", "1", "--t-end", "1", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("t,theta,w\n0.0,0.0,1.0\n"));
    let full = filcol(&[
        "simulate", "--alpha", "0.2", "--gamma", "2", "--r1", "1", "--z1", "0", "--r2", "1.2", "--z2", "0", "--t-end", "1",
        "--full", "--format", "csv",
    ]);
    assert!(stdout(&full).starts_with("t,r1,z1,r2,z2\n"));
}

#[test]
fn off_invariant_state_is_simulated_with_a_certificate() {
    let v = json(&["simulate", "--alpha", "0.2", "--gamma", "1.5", "--r1", "1", "--z1", "0.3", "--r2", "1", "--z2", "0", "--t-end", "5"]);
    assert_eq!(v["system"], "hyperbolic");
    assert_eq!(v["outcome"]["kind"], "Survived");
    assert!(v["certificate"]["min_separation"].as_f64().unwrap() > 0.0);
}

#[test]
fn classify_rejects_off_invariant_full_state() {
    let out = filcol(&["classify", "--alpha", "0.2", "--gamma", "1.5", "--r1", "1", "--z1", "0", "--r2", "1", "--z2", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot collide"));
}

#[test]
fn small_ratio_is_renamed_and_reported() {
    let v = json(&["classify", "--alpha", "0.2", "--gamma", "0.8", "--theta0", "0", "--w0", "1"]);
    assert_eq!(v["params"]["renamed"], true);
    assert_eq!(v["params"]["input_gamma"], 0.8);
    assert!((v["params"]["gamma"].as_f64().unwrap() - 1.25).abs() < 1e-15);
}

#[test]
fn sweep_smoke_grid_has_four_rows() {
    let mut args = vec!["sweep", "--alpha", "0.2", "--gamma", "1.1"];
    args.extend(GRID_2X2);
    let out = filcol(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("theta0,w0,verdict,h0,t_estimate"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn supercritical_sweep_passes_through_everywhere() {
    let out = filcol(&[
        "sweep", "--alpha", "0.2", "--gamma", "2", "--theta-min", "-2", "--theta-max", "4", "--w-min", "-2", "--w-max",
        "2", "--n-theta", "50", "--n-w", "50",
    ]);
    let text = stdout(&out);
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2500);
    assert!(rows.iter().all(|r| r.contains(",GlobalPassThrough,")));
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let args = [
        "sweep", "--alpha", "0.2", "--gamma", "1.1", "--theta-min", "-2", "--theta-max", "4", "--w-min", "-2", "--w-max",
        "2", "--n-theta", "12", "--n-w", "12", "--with-oracle",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_filcol")).args(args).env("FILCOL_THREADS", threads).output().unwrap()
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("144/144"));
}

#[test]
fn sweep_rejects_bad_thread_cap_and_singular_grid() {
    let mut args = vec!["sweep", "--alpha", "0.2", "--gamma", "2"];
    args.extend(GRID_2X2);
    let out = Command::new(env!("CARGO_BIN_EXE_filcol")).args(&args).env("FILCOL_THREADS", "0").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = filcol(&[
        "sweep", "--alpha", "0.2", "--gamma", "1", "--theta-min", "-1", "--theta-max", "1", "--w-min", "-1", "--w-max",
        "1", "--n-theta", "3", "--n-w", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(filcol(&["gamma-star", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(filcol(&["classify", "--alpha", "0.2", "--gamma", "1", "--theta0", "0", "--w0", "0"]).status.code(), Some(2));
    let out = filcol(&["simulate", "--alpha", "0.5", "--gamma", "1", "--theta0", "0", "--w0", "0.5", "--t-end", "1000", "--max-steps", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_with_empty_selection_reports_nothing() {
    let v = json(&["verify", "--checks", ""]);
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
    assert_eq!(v["failed"], 0);
}

#[test]
fn verify_reports_measured_values() {
    let v = json(&["verify", "--checks", "gamma_star,bound_domination"]);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert_eq!(checks[0]["name"], "gamma_star");
    assert_eq!(checks[0]["passed"], true);
    assert_eq!(checks[1]["measured"]["branches"].as_array().unwrap().len(), 3);
}

#[test]
fn config_file_with_flag_override_and_atomic_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "alpha = 0.2\ngamma = 1.0\ntheta0 = 0.0\nw0 = 1.0\n").unwrap();
    let out_path = dir.path().join("out.json");
    let out = filcol(&[
        "--config", cfg.to_str().unwrap(), "classify", "--w0", "-1", "--output", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["verdict"], "NoCollisionGamma1");
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 2);

    std::fs::write(&cfg, "alpha = 0.2\nbogus = 1\n").unwrap();
    let out = filcol(&["--config", cfg.to_str().unwrap(), "gamma-star"]);
    assert_eq!(out.status.code(), Some(2));
}
