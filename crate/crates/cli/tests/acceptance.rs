//! Acceptance battery: one PASS/FAIL line per criterion.

use filcol::verify::{run_battery, Check};
use serde_json::Value;

fn field(c: &Check, key: &str) -> String {
    match c.measured.get(key) {
        Some(Value::Number(n)) => n.to_string(),
        Some(v) => v.to_string(),
        None => "-".into(),
    }
}

fn detail(c: &Check) -> String {
    let keys: &[&str] = match c.name {
        "gamma_star" => &["gamma_star", "residual", "runtime_us"],
        "unit_ratio_zero_energy" => &["event_time", "expected", "relative_error"],
        "implicit_unit_ratio" => &["samples", "max_relative_error", "runtime_s"],
        "classifier_oracle" => &["disagreements", "runtime_s"],
        "bound_domination" => &["runtime_s"],
        "conservation" => &["max_h_drift", "max_d_drift", "h_trajectories", "d_trajectories"],
        "supercritical_corridor" => &["points_outside", "w_at_50", "descent_line"],
        "certificate" => &["trajectories", "failures", "min_separation_over_bound"],
        "ansatz" => &["states", "max_residual"],
        "subcritical_zero_energy" => &["relative_error", "event_over_printed"],
        _ => &[],
    };
    let mut parts: Vec<String> = keys.iter().map(|k| format!("{k}={}", field(c, k))).collect();
    if let Some(Value::Array(branches)) = c.measured.get("branches") {
        for b in branches {
            parts.push(format!("{}:violations={},min_ratio={}", b["branch"], b["violations"], b["min_bound_over_time"]));
        }
    }
    parts.join(" ")
}

fn main() {
    let report = match run_battery(0.2, 100, 2024, None) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL battery aborted: {e}");
            std::process::exit(1);
        }
    };
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2} {:<24} {} ({:.3}s)", c.criterion, c.name, detail(c), c.seconds);
        match c.name {
            "unit_ratio_zero_energy" => println!(
                "INFO criterion  2 event time vs W0^2/(2 alpha) = {}: relative error {}",
                field(c, "derived_value"),
                field(c, "derived_relative_error")
            ),
            "supercritical_corridor" => println!(
                "INFO criterion  7 W(50) = {} vs corrected line {}: {}",
                field(c, "w_at_50"),
                field(c, "corrected_descent_line"),
                field(c, "corrected_descent_holds")
            ),
            _ => {}
        }
    }
    println!("{} passed, {} failed", report.passed, report.failed);
    if report.failed > 0 {
        std::process::exit(1);
    }
}
