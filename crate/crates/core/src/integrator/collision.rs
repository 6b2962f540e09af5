//! Event-detecting collision oracle for the reduced system.

use super::{integrate, Direction, EventKind, EventSpec, IntegrationConfig, Outcome, ReducedSystem, Trajectory};
use crate::dynamics::rhs_reduced;
use crate::error::{Error, Result};
use crate::math;
use crate::params::Params;
use crate::state::ReducedState;

pub const DEFAULT_EPS_W: f64 = 1e-8;
pub const DEFAULT_EPS_R: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CollisionOutcome {
    /// Finite-time singularity reached with `W` positive and non-increasing
    /// along the whole trajectory and `θ` decreasing.
    Collided(f64),
    Survived(f64),
    /// Finite-time singularity without the monotone approach of `W` to zero.
    NonMonotoneBlowUp(f64),
    Inconclusive,
}

impl CollisionOutcome {
    pub fn is_collision(&self) -> bool {
        matches!(self, CollisionOutcome::Collided(_))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CollisionOutcome::Collided(_) => "Collided",
            CollisionOutcome::Survived(_) => "Survived",
            CollisionOutcome::NonMonotoneBlowUp(_) => "NonMonotoneBlowUp",
            CollisionOutcome::Inconclusive => "Inconclusive",
        }
    }

    pub fn time(&self) -> Option<f64> {
        match *self {
            CollisionOutcome::Collided(t) | CollisionOutcome::Survived(t) | CollisionOutcome::NonMonotoneBlowUp(t) => {
                Some(t)
            }
            CollisionOutcome::Inconclusive => None,
        }
    }
}

/// `W` never increases by more than the integrator's own error level.
fn w_non_increasing(traj: &Trajectory<2>, cfg: &IntegrationConfig) -> bool {
    traj.states.windows(2).all(|pair| {
        let (w0, w1) = (pair[0][1], pair[1][1]);
        w1 <= w0 + cfg.abs_tol + cfg.rel_tol * w0.abs()
    })
}

/// Integrates the reduced system until collision, blow-up, or `t_end`.
///
/// Events: `W` dropping below `eps_w` (recorded), `θ` dropping below
/// `log eps_r` (terminal), step collapse (terminal). A singularity counts as a
/// collision only when `W` stayed positive and non-increasing from `t = 0`.
pub fn simulate_until_collision(
    rs0: &ReducedState,
    p: &Params,
    cfg: &IntegrationConfig,
    eps_w: f64,
    eps_r: f64,
    t_end: f64,
) -> Result<(CollisionOutcome, Trajectory<2>)> {
    if !(eps_w > 0.0 && eps_w.is_finite() && eps_r > 0.0 && eps_r.is_finite()) {
        return Err(Error::InvalidInitialState("eps_w and eps_r must be positive"));
    }
    if rhs_reduced(rs0, p).is_err() {
        return Err(Error::InvalidInitialState("vector field undefined at the initial state"));
    }
    let events = [
        EventSpec::new(EventKind::WBelow(eps_w), Direction::Decreasing, false),
        EventSpec::new(EventKind::ThetaEscapesBelow(math::ln(eps_r)), Direction::Decreasing, true),
        EventSpec::new(EventKind::StepCollapse, Direction::Any, true),
    ];
    let traj = integrate(&ReducedSystem { params: *p }, rs0.to_array(), t_end, cfg, &events)?;
    let (t_last, y_last) = traj.last().ok_or(Error::EmptyTrajectory)?;
    let outcome = match traj.outcome {
        Outcome::ReachedTEnd => CollisionOutcome::Survived(t_last),
        Outcome::EventTerminated | Outcome::StepCollapsed => {
            let theta_falling = rhs_reduced(&ReducedState::from_array(y_last), p)
                .map(|f| f[0] < 0.0)
                .unwrap_or(true)
                && y_last[0] < rs0.theta;
            let w_positive = y_last[1] > 0.0;
            if theta_falling && w_positive && w_non_increasing(&traj, cfg) {
                CollisionOutcome::Collided(t_last)
            } else if theta_falling && w_positive {
                CollisionOutcome::NonMonotoneBlowUp(t_last)
            } else {
                CollisionOutcome::Inconclusive
            }
        }
    };
    Ok((outcome, traj))
}
