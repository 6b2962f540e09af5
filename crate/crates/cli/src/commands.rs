//! `classify`, `simulate`, `gamma-star` and `theta-star`.

use std::collections::BTreeMap;

use filcol_core::analysis::threshold::{gamma_star_root, theta_star};
use filcol_core::analysis::{classify, collision_time, no_collision_certificate, CollisionTimeEstimate, EstimateKind};
use filcol_core::dynamics::{default_tol_d, reduce};
use filcol_core::integrator::{
    integrate_full, integrate_hyperbolic, simulate_until_collision, Direction, EventKind,
    EventSpec, Outcome, Trajectory,
};
use filcol_core::{HyperbolicState, Params, ReducedState, Reduction, Renaming};
use serde::Serialize;

use crate::config::{Initial, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{to_csv, to_json, Format};

#[derive(Debug, Clone, Serialize)]
pub struct ParamsReport {
    pub alpha: f64,
    /// Ratio after normalization (`≥ 1`).
    pub gamma: f64,
    pub input_gamma: f64,
    /// The filaments were swapped (and `z` reflected) to bring `γ` to `1/γ`;
    /// states and times below refer to the renamed pair, whose time runs
    /// `time_scale` times faster.
    pub renamed: bool,
    pub time_scale: f64,
}

impl ParamsReport {
    pub fn new(p: &Params, r: Renaming) -> Self {
        let input_gamma = match r {
            Renaming::Identity => p.gamma(),
            Renaming::Swapped { original_gamma } => original_gamma,
        };
        ParamsReport { alpha: p.alpha(), gamma: p.gamma(), input_gamma, renamed: r.is_swapped(), time_scale: r.time_scale() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub kind: &'static str,
    pub value: f64,
    pub formula: &'static str,
    pub constants: BTreeMap<&'static str, f64>,
    pub uncorrected_value: Option<f64>,
}

impl From<&CollisionTimeEstimate> for EstimateReport {
    fn from(e: &CollisionTimeEstimate) -> Self {
        EstimateReport {
            kind: match e.kind {
                EstimateKind::Exact => "Exact",
                EstimateKind::ImplicitRoot => "ImplicitRoot",
                EstimateKind::UpperBound => "UpperBound",
            },
            value: e.value,
            formula: e.formula.as_str(),
            constants: e.constants.clone(),
            uncorrected_value: e.uncorrected_value,
        }
    }
}

/// One classified initial state; also the sweep CSV schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRow {
    pub theta0: f64,
    pub w0: f64,
    pub verdict: &'static str,
    pub h0: f64,
    pub t_estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct ClassifyReport {
    params: ParamsReport,
    theta0: f64,
    w0: f64,
    verdict: &'static str,
    regime: String,
    h0: f64,
    gamma_star: f64,
    theta_star: Option<f64>,
    collision_time: Option<EstimateReport>,
}

fn params_of(rc: &RunConfig) -> CliResult<(Params, Renaming)> {
    rc.params.ok_or_else(|| CliError::config("--alpha and --gamma are required"))
}

/// Reduced state for commands that need `d = 0`.
fn reduced_initial(initial: Initial, p: &Params) -> CliResult<ReducedState> {
    match initial {
        Initial::Reduced(rs) => Ok(rs),
        Initial::Full(s) => match reduce(&s, p, default_tol_d(&s, p))? {
            Reduction::Reduced(rs) => Ok(rs),
            Reduction::Hyperbolic(hs) => Err(CliError::config(format!(
                "d = gamma*r1^2 - r2^2 = {} is not zero: filaments with d != 0 cannot collide, so there is \
                 nothing to classify (use `simulate` to integrate this state)",
                hs.d
            ))),
        },
    }
}

/// Classification of one reduced state, with the collision time when it collides.
pub fn classify_row(rs: &ReducedState, p: &Params) -> CliResult<(ClassRow, Option<CollisionTimeEstimate>)> {
    let class = classify(rs, p)?;
    let est = if class.verdict.is_collision() { Some(collision_time(rs, p)?) } else { None };
    let row = ClassRow {
        theta0: rs.theta,
        w0: rs.w,
        verdict: class.verdict.as_str(),
        h0: class.h0,
        t_estimate: est.as_ref().map(|e| e.value),
    };
    Ok((row, est))
}

pub fn classify_cmd(rc: &RunConfig) -> CliResult<String> {
    let (p, renaming) = params_of(rc)?;
    let initial = rc.initial.ok_or_else(|| CliError::config("an initial state is required"))?;
    let rs = reduced_initial(initial, &p)?;
    let (row, est) = classify_row(&rs, &p)?;
    match rc.format {
        Format::Csv => to_csv([row]),
        Format::Json => {
            let class = classify(&rs, &p)?;
            to_json(&ClassifyReport {
                params: ParamsReport::new(&p, renaming),
                theta0: rs.theta,
                w0: rs.w,
                verdict: row.verdict,
                regime: format!("{:?}", class.regime),
                h0: class.h0,
                gamma_star: class.gamma_star,
                theta_star: class.theta_star,
                collision_time: est.as_ref().map(EstimateReport::from),
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct EventReport {
    time: f64,
    kind: String,
    state: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct OutcomeReport {
    kind: &'static str,
    time: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct CertificateReport {
    h_level: f64,
    min_separation: f64,
    theta_min: f64,
}

#[derive(Debug, Clone, Serialize)]
struct SimulateReport {
    params: ParamsReport,
    system: &'static str,
    /// Column names of `trajectory` rows after `t`.
    coordinates: Vec<&'static str>,
    d: f64,
    outcome: OutcomeReport,
    integration_outcome: &'static str,
    drift: BTreeMap<&'static str, f64>,
    accepted_steps: u64,
    rejected_steps: u64,
    events: Vec<EventReport>,
    collision_time: Option<EstimateReport>,
    certificate: Option<CertificateReport>,
    trajectory: Vec<Vec<f64>>,
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::ReachedTEnd => "ReachedTEnd",
        Outcome::EventTerminated => "EventTerminated",
        Outcome::StepCollapsed => "StepCollapsed",
    }
}

fn event_name(k: EventKind) -> String {
    match k {
        EventKind::WCrossesZero => "WCrossesZero".into(),
        EventKind::ThetaEscapesBelow(x) => format!("ThetaEscapesBelow({x})"),
        EventKind::WBelow(x) => format!("WBelow({x})"),
        EventKind::StepCollapse => "StepCollapse".into(),
    }
}

fn rows<const N: usize>(traj: &Trajectory<N>) -> Vec<Vec<f64>> {
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(t, y)| std::iter::once(*t).chain(y.iter().copied()).collect())
        .collect()
}

fn events<const N: usize>(traj: &Trajectory<N>) -> Vec<EventReport> {
    traj.events
        .iter()
        .map(|e| EventReport { time: e.time, kind: event_name(e.spec.kind), state: e.state.to_vec() })
        .collect()
}

/// Integration outcome of a run that is not watched by the collision oracle.
fn plain_outcome(o: Outcome, t: f64) -> OutcomeReport {
    match o {
        Outcome::ReachedTEnd => OutcomeReport { kind: "Survived", time: Some(t) },
        _ => OutcomeReport { kind: "Inconclusive", time: Some(t) },
    }
}

pub fn simulate_cmd(rc: &RunConfig) -> CliResult<String> {
    let (p, renaming) = params_of(rc)?;
    let initial = rc.initial.ok_or_else(|| CliError::config("an initial state is required"))?;
    let collapse = [EventSpec::new(EventKind::StepCollapse, Direction::Any, true)];
    let params = ParamsReport::new(&p, renaming);

    let report = if rc.full_system {
        let s = match initial {
            Initial::Full(s) => s,
            Initial::Reduced(rs) => filcol_core::dynamics::lift_reduced(&rs, &p),
        };
        let traj = integrate_full(&s, &p, rc.t_end, &rc.integration, &collapse)?;
        let t_last = traj.last().map(|(t, _)| t).unwrap_or(0.0);
        SimulateReport {
            params,
            system: "full",
            coordinates: vec!["r1", "z1", "r2", "z2"],
            d: filcol_core::dynamics::conserved_d(&s, &p),
            outcome: plain_outcome(traj.outcome, t_last),
            integration_outcome: outcome_name(traj.outcome),
            drift: traj.drift.clone(),
            accepted_steps: traj.stats.accepted,
            rejected_steps: traj.stats.rejected,
            events: events(&traj),
            collision_time: None,
            certificate: None,
            trajectory: rows(&traj),
        }
    } else {
        let reduction = match initial {
            Initial::Reduced(rs) => Reduction::Reduced(rs),
            Initial::Full(s) => reduce(&s, &p, default_tol_d(&s, &p))?,
        };
        match reduction {
            Reduction::Reduced(rs) => {
                let (outcome, traj) =
                    simulate_until_collision(&rs, &p, &rc.integration, rc.eps_w, rc.eps_r, rc.t_end)?;
                let estimate = match classify(&rs, &p) {
                    Ok(c) if c.verdict.is_collision() => Some(EstimateReport::from(&collision_time(&rs, &p)?)),
                    _ => None,
                };
                SimulateReport {
                    params,
                    system: "reduced",
                    coordinates: vec!["theta", "w"],
                    d: 0.0,
                    outcome: OutcomeReport { kind: outcome.as_str(), time: outcome.time() },
                    integration_outcome: outcome_name(traj.outcome),
                    drift: traj.drift.clone(),
                    accepted_steps: traj.stats.accepted,
                    rejected_steps: traj.stats.rejected,
                    events: events(&traj),
                    collision_time: estimate,
                    certificate: None,
                    trajectory: rows(&traj),
                }
            }
            Reduction::Hyperbolic(hs) => hyperbolic_report(&hs, &p, params, rc)?,
        }
    };
    match rc.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("t");
            for c in &report.coordinates {
                out.push(',');
                out.push_str(c);
            }
            out.push('\n');
            let body = to_csv(report.trajectory.iter())?;
            // The csv writer emits no header for plain sequences.
            out.push_str(&body);
            Ok(out)
        }
    }
}

fn hyperbolic_report(hs: &HyperbolicState, p: &Params, params: ParamsReport, rc: &RunConfig) -> CliResult<SimulateReport> {
    let cert = no_collision_certificate(hs, p)?;
    let collapse = [EventSpec::new(EventKind::StepCollapse, Direction::Any, true)];
    let traj = integrate_hyperbolic(hs, p, rc.t_end, &rc.integration, &collapse)?;
    let t_last = traj.last().map(|(t, _)| t).unwrap_or(0.0);
    Ok(SimulateReport {
        params,
        system: "hyperbolic",
        coordinates: vec!["theta", "w"],
        d: hs.d,
        outcome: plain_outcome(traj.outcome, t_last),
        integration_outcome: outcome_name(traj.outcome),
        drift: traj.drift.clone(),
        accepted_steps: traj.stats.accepted,
        rejected_steps: traj.stats.rejected,
        events: events(&traj),
        collision_time: None,
        certificate: Some(CertificateReport {
            h_level: cert.h_level,
            min_separation: cert.min_separation,
            theta_min: cert.theta_min,
        }),
        trajectory: rows(&traj),
    })
}

#[derive(Debug, Clone, Serialize)]
struct GammaStarReport {
    alpha: f64,
    gamma_star: f64,
    eta_star: f64,
    residual: f64,
}

pub fn gamma_star_cmd(rc: &RunConfig) -> CliResult<String> {
    let t = gamma_star_root(rc.alpha)?;
    let report = GammaStarReport { alpha: rc.alpha, gamma_star: t.gamma, eta_star: t.eta, residual: t.residual };
    match rc.format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv([report]),
    }
}

#[derive(Debug, Clone, Serialize)]
struct ThetaStarReport {
    alpha: f64,
    gamma: f64,
    renamed: bool,
    h0: f64,
    theta_star: f64,
}

pub fn theta_star_cmd(rc: &RunConfig) -> CliResult<String> {
    let (p, renaming) = params_of(rc)?;
    let h0 = rc.h0.ok_or_else(|| CliError::config("--h0 is required"))?;
    let ts = theta_star(&p, h0)?;
    let report = ThetaStarReport { alpha: p.alpha(), gamma: p.gamma(), renamed: renaming.is_swapped(), h0, theta_star: ts };
    match rc.format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv([report]),
    }
}
