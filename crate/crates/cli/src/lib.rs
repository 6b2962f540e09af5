//! Command-line front end for `filcol-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;
pub mod verify;

use config::{CommandKind, RunConfig};
use error::CliResult;
use output::{to_json, write_atomic};

/// Output of one command: the artifact and an optional line for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub body: String,
    pub summary: Option<String>,
}

/// Runs the command without writing anything.
pub fn execute(rc: &RunConfig) -> CliResult<Artifact> {
    let plain = |body: String| Artifact { body, summary: None };
    Ok(match rc.command {
        CommandKind::Classify => plain(commands::classify_cmd(rc)?),
        CommandKind::Simulate => plain(commands::simulate_cmd(rc)?),
        CommandKind::GammaStar => plain(commands::gamma_star_cmd(rc)?),
        CommandKind::ThetaStar => plain(commands::theta_star_cmd(rc)?),
        CommandKind::Sweep => {
            let (body, summary) = sweep::sweep_cmd(rc)?;
            Artifact { body, summary }
        }
        CommandKind::Verify => {
            let report = verify::run_battery(rc.alpha, rc.samples, rc.seed, rc.checks.as_deref())?;
            let summary = format!("{} passed, {} failed", report.passed, report.failed);
            Artifact { body: to_json(&report)?, summary: Some(summary) }
        }
    })
}

/// Runs the command and writes its artifact to the output file or standard output.
pub fn run(rc: &RunConfig) -> CliResult<Artifact> {
    let artifact = execute(rc)?;
    match &rc.output_path {
        Some(path) => write_atomic(path, &artifact.body)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(artifact.body.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(artifact)
}
