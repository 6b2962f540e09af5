//! Grid sweeps over initial states, in parallel across nodes.

use filcol_core::analysis::classify;
use filcol_core::integrator::{simulate_until_collision, IntegrationConfig};
use filcol_core::{Params, ReducedState};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{classify_row, ClassRow};
use crate::config::{Grid, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{to_csv, to_json, Format};
use crate::verify::outcomes_agree;

pub const THREADS_ENV: &str = "FILCOL_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub theta0: f64,
    pub w0: f64,
    pub verdict: &'static str,
    pub h0: f64,
    pub t_estimate: Option<f64>,
    pub oracle_outcome: &'static str,
    pub oracle_time: Option<f64>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
struct SweepReport<R> {
    alpha: f64,
    gamma: f64,
    renamed: bool,
    rows: Vec<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement_rate: Option<f64>,
}

/// Thread cap from the environment; `None` leaves the choice to rayon.
pub fn thread_cap(value: Option<&str>) -> CliResult<Option<usize>> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::config(format!("{THREADS_ENV} must be a positive integer, got `{s}`"))),
        },
    }
}

fn pool() -> CliResult<rayon::ThreadPool> {
    let cap = thread_cap(std::env::var(THREADS_ENV).ok().as_deref())?;
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cap {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::numerical(format!("thread pool: {e}")))
}

fn check_grid(grid: &Grid, p: &Params) -> CliResult<()> {
    if p.is_unit_ratio() && grid.nodes().iter().any(|&(_, w)| w == 0.0) {
        return Err(CliError::config(
            "the grid contains W0 = 0, where gamma = 1 has no defined motion; shift the W range or change n_w",
        ));
    }
    Ok(())
}

/// Classified rows in row-major order.
pub fn sweep_rows(grid: &Grid, p: &Params) -> CliResult<Vec<ClassRow>> {
    check_grid(grid, p)?;
    pool()?.install(|| {
        grid.nodes().par_iter().map(|&(t, w)| classify_row(&ReducedState::new(t, w), p).map(|r| r.0)).collect()
    })
}

/// Classified rows with the integration oracle's outcome at each node.
pub fn sweep_with_oracle(
    grid: &Grid,
    p: &Params,
    cfg: &IntegrationConfig,
    eps: (f64, f64),
    t_end: f64,
) -> CliResult<Vec<OracleRow>> {
    check_grid(grid, p)?;
    pool()?.install(|| {
        grid.nodes()
            .par_iter()
            .map(|&(theta0, w0)| {
                let rs = ReducedState::new(theta0, w0);
                let (row, _) = classify_row(&rs, p)?;
                let collides = classify(&rs, p)?.verdict.is_collision();
                let (outcome, _) = simulate_until_collision(&rs, p, cfg, eps.0, eps.1, t_end)?;
                Ok(OracleRow {
                    theta0,
                    w0,
                    verdict: row.verdict,
                    h0: row.h0,
                    t_estimate: row.t_estimate,
                    oracle_outcome: outcome.as_str(),
                    oracle_time: outcome.time(),
                    agree: outcomes_agree(collides, &outcome),
                })
            })
            .collect()
    })
}

/// Sweep artifact and, with the oracle, a one-line agreement summary.
pub fn sweep_cmd(rc: &RunConfig) -> CliResult<(String, Option<String>)> {
    let (p, renaming) = rc.params.ok_or_else(|| CliError::config("--alpha and --gamma are required"))?;
    let grid = rc.grid.ok_or_else(|| CliError::config("a grid is required"))?;
    let (alpha, gamma, renamed) = (p.alpha(), p.gamma(), renaming.is_swapped());
    if rc.with_oracle {
        let rows = sweep_with_oracle(&grid, &p, &rc.integration, (rc.eps_w, rc.eps_r), rc.t_end)?;
        let agreed = rows.iter().filter(|r| r.agree).count();
        let rate = agreed as f64 / rows.len() as f64;
        let summary = format!("oracle agreement: {agreed}/{} ({:.2}%)", rows.len(), 100.0 * rate);
        let body = match rc.format {
            Format::Csv => to_csv(rows)?,
            Format::Json => to_json(&SweepReport { alpha, gamma, renamed, rows, agreement_rate: Some(rate) })?,
        };
        Ok((body, Some(summary)))
    } else {
        let rows = sweep_rows(&grid, &p)?;
        let body = match rc.format {
            Format::Csv => to_csv(rows)?,
            Format::Json => to_json(&SweepReport { alpha, gamma, renamed, rows, agreement_rate: None })?,
        };
        Ok((body, None))
    }
}
