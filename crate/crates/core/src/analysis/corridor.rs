//! A-priori linear corridor for `W(t)` above the critical ratio.

use super::threshold::{axis_coeff, regime, Regime};
use crate::dynamics::hamiltonian;
use crate::error::{Error, Result};
use crate::math;
use crate::params::Params;
use crate::state::ReducedState;

/// `w0 + lower_slope·t ≤ W(t) ≤ w0 + upper_slope·t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCorridor {
    pub w0: f64,
    pub lower_slope: f64,
    pub upper_slope: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub h0: f64,
    /// `θ̃`, where the level set meets the axis `W = 0`.
    pub theta_axis: f64,
}

impl LinearCorridor {
    pub fn bounds(&self, t: f64) -> (f64, f64) {
        (self.w0 + self.lower_slope * t, self.w0 + self.upper_slope * t)
    }

    /// Whether `w` lies in the corridor at time `t`, with slack `tol·(1 + |w|)`.
    pub fn contains(&self, t: f64, w: f64, tol: f64) -> bool {
        let (lo, hi) = self.bounds(t);
        let slack = tol * (1.0 + w.abs());
        w >= lo - slack && w <= hi + slack
    }

    /// Slopes with `θ̲` and `θ̄` placed the other way round:
    /// `(-(γ+γ^{-1/2})e^{-θ̄}, -|f(θ̲)|)`. These do not bound `Ẇ`.
    pub fn swapped_slopes(&self, p: &Params) -> (f64, f64) {
        (
            -p.self_coeff() * math::exp(-self.theta_hi),
            -axis_coeff(p).abs() * math::exp(-self.theta_lo),
        )
    }
}

/// Corridor for `γ > γ*`.
///
/// On the level set `θ ∈ [θ̃, θ̄)` with `θ̃ = log(c/H0)`, `c = f(θ)e^{θ} < 0`, and
/// `θ̄ = log((γ+γ^{-1/2})/|H0|)`. The vector field satisfies
/// `-(γ+γ^{-1/2})e^{-θ} ≤ Ẇ ≤ f(θ) = c e^{-θ}`, and `f` is increasing, so
/// `Ẇ ≥ -(γ+γ^{-1/2})e^{-θ̲}` with `θ̲ = θ̃ - 1` and `Ẇ ≤ f(θ̄)`.
pub fn apriori_corridor(rs0: &ReducedState, p: &Params) -> Result<LinearCorridor> {
    if regime(p)?.0 != Regime::Supercritical {
        return Err(Error::RegimeError("corridor needs gamma > gamma_star"));
    }
    let h0 = hamiltonian(rs0, p)?;
    let c = axis_coeff(p);
    if !(h0 < 0.0 && c < 0.0) {
        return Err(Error::DomainError("corridor needs H0 < 0"));
    }
    let a = p.self_coeff();
    let theta_axis = math::ln(c / h0);
    let theta_lo = theta_axis - 1.0;
    let theta_hi = f64::max(math::ln(a / h0.abs()), theta_lo + 1e-6);
    Ok(LinearCorridor {
        w0: rs0.w,
        lower_slope: -a * math::exp(-theta_lo),
        upper_slope: c * math::exp(-theta_hi),
        theta_lo,
        theta_hi,
        h0,
        theta_axis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes_are_ordered_and_negative() {
        let p = Params::new(0.2, 2.0).unwrap();
        let c = apriori_corridor(&ReducedState::new(0.0, 1.0), &p).unwrap();
        assert!(c.lower_slope <= c.upper_slope && c.upper_slope < 0.0);
        assert!(c.theta_lo < c.theta_hi);
        // Hand values: H0 = -2.4458, θ̃ < 0 < θ̄.
        assert!((c.h0 + 2.4458).abs() < 1e-4);
        assert!(c.theta_axis < 0.0 && c.theta_hi > 0.0);
        let (lo, hi) = c.bounds(50.0);
        assert!((lo + 443.55).abs() < 0.01, "{lo}");
        assert!((hi + 90.44).abs() < 0.01, "{hi}");
    }

    #[test]
    fn swapped_slopes_are_empty() {
        let p = Params::new(0.2, 2.0).unwrap();
        let c = apriori_corridor(&ReducedState::new(0.0, 1.0), &p).unwrap();
        let (lo, hi) = c.swapped_slopes(&p);
        assert!(lo > hi);
    }

    #[test]
    fn level_set_theta_range() {
        // Along the level set, θ̃ ≤ θ < θ̄.
        let p = Params::new(0.2, 2.0).unwrap();
        let c = apriori_corridor(&ReducedState::new(0.5, -0.3), &p).unwrap();
        assert!(0.5 >= c.theta_axis && 0.5 < c.theta_hi);
    }

    #[test]
    fn regime_check() {
        let p = Params::new(0.2, 1.1).unwrap();
        assert!(matches!(apriori_corridor(&ReducedState::new(0.0, 1.0), &p), Err(Error::RegimeError(_))));
    }
}
