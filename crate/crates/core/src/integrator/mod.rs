//! Adaptive Dormand–Prince 5(4) integration with Hermite dense output, event
//! location and conserved-quantity drift monitoring.

mod collision;
mod dopri;
mod systems;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub use collision::{simulate_until_collision, CollisionOutcome, DEFAULT_EPS_R, DEFAULT_EPS_W};
pub use systems::{FullSystem, HyperbolicSystem, OdeSystem, ReducedSystem};

use crate::error::{Error, Result};
use crate::math;
use crate::params::Params;
use crate::state::{FullState, HyperbolicState, ReducedState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: u64,
    pub h_init: f64,
    pub h_min: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig { rel_tol: 1e-10, abs_tol: 1e-12, max_steps: 10_000_000, h_init: 1e-4, h_min: 1e-14 }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if !(pos(self.rel_tol) && pos(self.abs_tol)) {
            return Err(Error::DomainError("tolerances must be positive"));
        }
        if !(pos(self.h_init) && pos(self.h_min) && self.h_min < self.h_init) {
            return Err(Error::DomainError("need 0 < h_min < h_init"));
        }
        if self.max_steps == 0 {
            return Err(Error::DomainError("max_steps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    WCrossesZero,
    ThetaEscapesBelow(f64),
    WBelow(f64),
    /// Fires when the step size falls below `h_min` (or below the resolution of `t`).
    StepCollapse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Increasing,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventSpec {
    pub kind: EventKind,
    pub direction: Direction,
    /// Stop the integration at the first occurrence.
    pub terminal: bool,
}

impl EventSpec {
    pub fn new(kind: EventKind, direction: Direction, terminal: bool) -> Self {
        EventSpec { kind, direction, terminal }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            EventKind::ThetaEscapesBelow(x) | EventKind::WBelow(x) if !x.is_finite() => {
                Err(Error::DomainError("event threshold must be finite"))
            }
            _ => Ok(()),
        }
    }

    fn indicator<S: OdeSystem<N>, const N: usize>(&self, sys: &S, y: &[f64; N]) -> Option<f64> {
        match self.kind {
            EventKind::WCrossesZero => Some(sys.w(y)),
            EventKind::ThetaEscapesBelow(th) => Some(sys.theta(y) - th),
            EventKind::WBelow(th) => Some(sys.w(y) - th),
            EventKind::StepCollapse => None,
        }
    }

    fn crossed(&self, before: f64, after: f64) -> bool {
        let down = before > 0.0 && after <= 0.0;
        let up = before < 0.0 && after >= 0.0;
        match self.direction {
            Direction::Decreasing => down,
            Direction::Increasing => up,
            Direction::Any => down || up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord<const N: usize> {
    pub time: f64,
    pub spec: EventSpec,
    pub state: [f64; N],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    ReachedTEnd,
    EventTerminated,
    StepCollapsed,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
    /// Size of the last step attempted before termination.
    pub last_h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub events: Vec<EventRecord<N>>,
    /// Maximum drift of the conserved quantity. The plain key holds the drift
    /// relative to the magnitude of the quantity's largest term (plus one);
    /// the `_abs` key holds the absolute drift.
    pub drift: BTreeMap<&'static str, f64>,
    pub outcome: Outcome,
    pub stats: StepStats,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, [f64; N])> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    /// Accepted step sizes.
    pub fn step_sizes(&self) -> Vec<f64> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Linear interpolation of the recorded states at `t`.
    pub fn sample(&self, t: f64) -> Option<[f64; N]> {
        let (first, last) = (*self.times.first()?, *self.times.last()?);
        if !(t >= first && t <= last) {
            return None;
        }
        let i = self.times.partition_point(|&x| x <= t);
        if i == 0 || i >= self.times.len() {
            return Some(self.states[i.saturating_sub(1).min(self.states.len() - 1)]);
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let s = (t - t0) / (t1 - t0);
        let (a, b) = (&self.states[i - 1], &self.states[i]);
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = a[k] + s * (b[k] - a[k]);
        }
        Some(out)
    }
}

/// Recorded drift maxima.
pub fn drift_report<const N: usize>(traj: &Trajectory<N>) -> Result<BTreeMap<&'static str, f64>> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    Ok(traj.drift.clone())
}

fn abs_key(name: &'static str) -> &'static str {
    match name {
        "H" => "H_abs",
        "d" => "d_abs",
        _ => "abs",
    }
}

struct DriftMonitor {
    name: &'static str,
    reference: Option<f64>,
    rel: f64,
    abs: f64,
}

impl DriftMonitor {
    fn observe(&mut self, value: Option<(f64, f64)>) {
        let Some((v, scale)) = value else { return };
        match self.reference {
            None => self.reference = Some(v),
            Some(r) => {
                let d = (v - r).abs();
                self.abs = self.abs.max(d);
                self.rel = self.rel.max(d / (1.0 + scale));
            }
        }
    }

    fn into_map(self) -> BTreeMap<&'static str, f64> {
        let mut m = BTreeMap::new();
        m.insert(self.name, self.rel);
        m.insert(abs_key(self.name), self.abs);
        m
    }
}

/// Proportional controller: safety 0.9, growth clamped to `[0.2, 5]`.
fn step_factor(err: f64) -> f64 {
    (0.9 * math::powf(err, -0.2)).clamp(0.2, 5.0)
}

/// Integrates `sys` from `y0` at `t = 0` to `t_end`.
pub fn integrate<S: OdeSystem<N>, const N: usize>(
    sys: &S,
    y0: [f64; N],
    t_end: f64,
    cfg: &IntegrationConfig,
    events: &[EventSpec],
) -> Result<Trajectory<N>> {
    cfg.validate()?;
    for e in events {
        e.validate()?;
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInitialState("t_end must be positive and finite"));
    }
    if !y0.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidInitialState("non-finite initial state"));
    }
    let mut f = sys.rhs(&y0).map_err(|_| Error::InvalidInitialState("vector field undefined at the initial state"))?;
    if !f.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidInitialState("vector field not finite at the initial state"));
    }

    let mut drift = DriftMonitor { name: S::INVARIANT, reference: None, rel: 0.0, abs: 0.0 };
    drift.observe(sys.invariant(&y0));
    let mut traj = Trajectory {
        times: alloc::vec![0.0],
        states: alloc::vec![y0],
        events: Vec::new(),
        drift: BTreeMap::new(),
        outcome: Outcome::ReachedTEnd,
        stats: StepStats { rhs_evals: 1, ..StepStats::default() },
    };
    let event_tol = 1e-12 * t_end;
    let mut t = 0.0;
    let mut y = y0;
    let mut h = cfg.h_init.min(t_end);
    let mut indicators: Vec<Option<f64>> = events.iter().map(|e| e.indicator(sys, &y)).collect();

    loop {
        if t >= t_end {
            break;
        }
        if traj.stats.accepted + traj.stats.rejected >= cfg.max_steps {
            return Err(Error::StepLimitExceeded { limit: cfg.max_steps, t });
        }
        let floor = f64::max(cfg.h_min, 8.0 * f64::EPSILON * t.abs());
        if h < floor {
            traj.outcome = Outcome::StepCollapsed;
            traj.stats.last_h = h;
            for e in events.iter().filter(|e| e.kind == EventKind::StepCollapse) {
                traj.events.push(EventRecord { time: t, spec: *e, state: y });
            }
            break;
        }
        let last_step = t + h >= t_end;
        if last_step {
            h = t_end - t;
        }
        traj.stats.rhs_evals += 6;
        let Some(st) = dopri::step(sys, &y, &f, h) else {
            traj.stats.rejected += 1;
            h *= 0.2;
            continue;
        };
        let err = (0..N).fold(0.0f64, |acc, i| {
            let scale = cfg.abs_tol + cfg.rel_tol * f64::max(y[i].abs(), st.y[i].abs());
            acc.max(st.err[i].abs() / scale)
        });
        if !(err <= 1.0) {
            traj.stats.rejected += 1;
            let factor = if err.is_finite() { step_factor(err).min(1.0) } else { 0.2 };
            h *= factor;
            continue;
        }
        traj.stats.accepted += 1;
        let t_new = if last_step { t_end } else { t + h };

        // Events on this step, earliest first.
        let mut hits: Vec<(f64, usize, [f64; N])> = Vec::new();
        let new_indicators: Vec<Option<f64>> = events.iter().map(|e| e.indicator(sys, &st.y)).collect();
        for (k, e) in events.iter().enumerate() {
            let (Some(g0), Some(g1)) = (indicators[k], new_indicators[k]) else { continue };
            if !e.crossed(g0, g1) {
                continue;
            }
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            let dt = t_new - t;
            for _ in 0..200 {
                if (hi - lo) * dt <= event_tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let ym = dopri::hermite(&y, &f, &st.y, &st.f, dt, mid);
                match e.indicator(sys, &ym) {
                    Some(gm) if e.crossed(g0, gm) => hi = mid,
                    _ => lo = mid,
                }
            }
            let ye = if hi >= 1.0 { st.y } else { dopri::hermite(&y, &f, &st.y, &st.f, dt, hi) };
            let te = if hi >= 1.0 { t_new } else { t + hi * dt };
            hits.push((te, k, ye));
        }
        hits.sort_by(|a, b| a.0.total_cmp(&b.0));
        let terminal = hits.iter().position(|&(_, k, _)| events[k].terminal);
        if let Some(pos) = terminal {
            for &(te, k, ye) in &hits[..=pos] {
                traj.events.push(EventRecord { time: te, spec: events[k], state: ye });
            }
            let (te, _, ye) = hits[pos];
            if te > t {
                drift.observe(sys.invariant(&ye));
                traj.times.push(te);
                traj.states.push(ye);
            }
            traj.outcome = Outcome::EventTerminated;
            traj.stats.last_h = h;
            break;
        }
        for &(te, k, ye) in &hits {
            traj.events.push(EventRecord { time: te, spec: events[k], state: ye });
        }

        t = t_new;
        y = st.y;
        f = st.f;
        indicators = new_indicators;
        drift.observe(sys.invariant(&y));
        traj.times.push(t);
        traj.states.push(y);
        traj.stats.rhs_evals += 1;
        traj.stats.last_h = h;

        let factor = if err == 0.0 { 5.0 } else { step_factor(err) };
        h *= factor;
    }
    traj.drift = drift.into_map();
    Ok(traj)
}

pub fn integrate_full(
    s: &FullState,
    p: &Params,
    t_end: f64,
    cfg: &IntegrationConfig,
    events: &[EventSpec],
) -> Result<Trajectory<4>> {
    s.validate().map_err(|_| Error::InvalidInitialState("invalid full state"))?;
    integrate(&FullSystem { params: *p }, s.to_array(), t_end, cfg, events)
}

pub fn integrate_reduced(
    rs: &ReducedState,
    p: &Params,
    t_end: f64,
    cfg: &IntegrationConfig,
    events: &[EventSpec],
) -> Result<Trajectory<2>> {
    integrate(&ReducedSystem { params: *p }, rs.to_array(), t_end, cfg, events)
}

pub fn integrate_hyperbolic(
    hs: &HyperbolicState,
    p: &Params,
    t_end: f64,
    cfg: &IntegrationConfig,
    events: &[EventSpec],
) -> Result<Trajectory<2>> {
    hs.validate().map_err(|_| Error::InvalidInitialState("invalid hyperbolic state"))?;
    integrate(&HyperbolicSystem { params: *p, d: hs.d }, [hs.theta, hs.w], t_end, cfg, events)
}
