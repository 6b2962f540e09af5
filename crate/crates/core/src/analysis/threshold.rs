//! The critical circulation ratio `γ*(α)`, the equilibrium structure, and the
//! separatrix angle `θ*` of the subcritical regime.

use crate::error::{Error, Result};
use crate::math;
use crate::params::Params;
use crate::roots::{bisect_newton, expand_upper};

/// `|γ - γ*|` at or below this is treated as `γ = γ*`.
pub const NEAR_CRITICAL_TOL: f64 = 1e-9;

const BISECTION_WIDTH: f64 = 1e-13;
const POLISH_STEPS: usize = 3;

/// `p(η) = -η⁴ + η³ + αη² - η + 1`; its root in `(1, ∞)` is `√γ*`.
#[inline]
pub fn quartic(eta: f64, alpha: f64) -> f64 {
    (((-eta + 1.0) * eta + alpha) * eta - 1.0) * eta + 1.0
}

#[inline]
fn quartic_slope(eta: f64, alpha: f64) -> f64 {
    ((-4.0 * eta + 3.0) * eta + 2.0 * alpha) * eta - 1.0
}

/// Root of the threshold quartic together with its residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub eta: f64,
    pub gamma: f64,
    pub residual: f64,
}

pub fn gamma_star_root(alpha: f64) -> Result<Threshold> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError("alpha must lie in (0, 1)"));
    }
    // p(1) = α > 0 and p → -∞, so [1 + 1e-12, 10] always brackets the root.
    let eta = bisect_newton(
        |e| quartic(e, alpha),
        |e| quartic_slope(e, alpha),
        1.0 + 1e-12,
        10.0,
        BISECTION_WIDTH,
        POLISH_STEPS,
    )?;
    Ok(Threshold { eta, gamma: eta * eta, residual: quartic(eta, alpha) })
}

/// Critical circulation ratio `γ*(α)` separating collision from pass-through.
pub fn gamma_star(alpha: f64) -> Result<f64> {
    gamma_star_root(alpha).map(|t| t.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `γ = 1`.
    UnitRatio,
    /// `1 < γ < γ*`.
    Subcritical,
    /// `γ = γ*` within [`NEAR_CRITICAL_TOL`].
    Critical,
    /// `γ > γ*`.
    Supercritical,
}

/// Regime of `p` and the value of `γ*(α)` used to decide it.
pub fn regime(p: &Params) -> Result<(Regime, f64)> {
    let gs = gamma_star(p.alpha())?;
    let g = p.gamma();
    let r = if p.is_unit_ratio() {
        Regime::UnitRatio
    } else if (g - gs).abs() <= NEAR_CRITICAL_TOL {
        Regime::Critical
    } else if g < gs {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    };
    Ok((r, gs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equilibria {
    NoneGamma1,
    NoneOffCritical,
    /// Every coplanar configuration `(θ, 0)` is at rest.
    LineAtCritical,
}

pub fn equilibria(p: &Params) -> Result<Equilibria> {
    Ok(match regime(p)?.0 {
        Regime::UnitRatio => Equilibria::NoneGamma1,
        Regime::Critical => Equilibria::LineAtCritical,
        Regime::Subcritical | Regime::Supercritical => Equilibria::NoneOffCritical,
    })
}

/// `-(γ + γ^{-1/2}) + α√γ/(√γ - 1)`: the coplanar rate is `f(θ) = axis_coeff · e^{-θ}`.
/// Positive below `γ*`, negative above. Undefined for `γ = 1`.
pub fn axis_coeff(p: &Params) -> f64 {
    -p.self_coeff() + p.coupling() / (p.sqrt_gamma() - 1.0)
}

/// `Ẇ` on the axis, `f(θ) = F2(θ, 0)`, for `γ > 1`.
pub fn axis_rate(theta: f64, p: &Params) -> f64 {
    axis_coeff(p) * math::exp(-theta)
}

/// `Ẇ` written as a function of `θ` on the level set `H = h0`:
/// `g(θ) = -(γ + γ^{-1/2}) e^{-θ} + (√γ-1)²/(α²γ) (h0 + (γ + γ^{-1/2}) e^{-θ})³ e^{2θ}`.
pub fn level_w_rate(theta: f64, p: &Params, h0: f64) -> f64 {
    let a = p.self_coeff();
    let q = h0 + a * math::exp(-theta);
    let c = p.coupling();
    -a * math::exp(-theta) + p.offset_coeff() * q * q * q * math::exp(2.0 * theta) / (c * c)
}

/// Separatrix angle `θ*` for `γ ∈ (1, γ*)` and `h0 > 0`: the unique zero of
/// [`level_w_rate`], found through the cubic `h(y)` in `y = (γ + γ^{-1/2}) e^{-θ}`.
pub fn theta_star(p: &Params, h0: f64) -> Result<f64> {
    if regime(p)?.0 != Regime::Subcritical {
        return Err(Error::RegimeError("theta_star needs 1 < gamma < gamma_star"));
    }
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::DomainError("theta_star needs h0 > 0"));
    }
    let a = p.self_coeff();
    let inv_a2 = 1.0 / (a * a);
    let c = p.coupling();
    let lead = p.offset_coeff() / (c * c);
    let h = |y: f64| -inv_a2 * y * y * y + lead * (h0 + y) * (h0 + y) * (h0 + y);
    let dh = |y: f64| -3.0 * inv_a2 * y * y + 3.0 * lead * (h0 + y) * (h0 + y);
    // h(0) = lead·h0³ > 0; the cubic coefficient is negative below γ*.
    let hi = expand_upper(&h, 0.0, h0, 200)?;
    let y_star = bisect_newton(h, dh, 0.0, hi, BISECTION_WIDTH * f64::max(1.0, hi), POLISH_STEPS)?;
    if !(y_star > 0.0) {
        return Err(Error::RootNotFound("separatrix root is not positive"));
    }
    Ok(math::ln(a / y_star))
}

#[cfg(test)]
mod tests {
    #![allow(clippy::excessive_precision)]

    use super::*;

    // Independent 200-step bisection in 40-digit arithmetic (mpmath).
    const GAMMA_STAR_0_2: f64 = 1.2186454933368133838;
    const GAMMA_STAR_0_5: f64 = 1.5991202585447460998;
    const GAMMA_STAR_0_05: f64 = 1.0512328478038753615;
    const GAMMA_STAR_0_9: f64 = 2.1491765036727099869;

    #[test]
    fn gamma_star_matches_high_precision_bisection() {
        for (alpha, expected) in
            [(0.2, GAMMA_STAR_0_2), (0.5, GAMMA_STAR_0_5), (0.05, GAMMA_STAR_0_05), (0.9, GAMMA_STAR_0_9)]
        {
            let t = gamma_star_root(alpha).unwrap();
            assert!((t.gamma - expected).abs() < 1e-12, "alpha={alpha}: {} vs {expected}", t.gamma);
            assert!(t.residual.abs() <= 1e-13);
        }
    }

    #[test]
    fn gamma_star_reported_value() {
        assert!((gamma_star(0.2).unwrap() - 1.219).abs() <= 1e-3);
    }

    #[test]
    fn half_alpha_hand_bracket() {
        assert!(quartic(1.2, 0.5) > 0.0);
        assert!(quartic(1.3, 0.5) < 0.0);
        let eta = gamma_star_root(0.5).unwrap().eta;
        assert!(eta > 1.2 && eta < 1.3);
    }

    #[test]
    fn gamma_star_tends_to_one() {
        let mut last = f64::INFINITY;
        for alpha in [1e-2, 1e-3, 1e-4, 1e-6] {
            let g = gamma_star(alpha).unwrap();
            assert!(g > 1.0 && g < last);
            last = g;
        }
        assert!(last - 1.0 < 1e-5);
        // p(η) = -(η - 1)(η³ + 1) at α = 0
        for eta in [1.5, 2.0, 3.0] {
            assert!((quartic(eta, 0.0) + (eta - 1.0) * (eta * eta * eta + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_star_domain() {
        assert!(gamma_star(0.0).is_err());
        assert!(gamma_star(1.0).is_err());
        assert!(gamma_star(-0.3).is_err());
    }

    #[test]
    fn equilibrium_structure() {
        for alpha in [0.1, 0.5, 0.9] {
            assert_eq!(equilibria(&Params::new(alpha, 1.0).unwrap()).unwrap(), Equilibria::NoneGamma1);
        }
        let gs = gamma_star(0.2).unwrap();
        let crit = Params::new(0.2, gs).unwrap();
        assert_eq!(equilibria(&crit).unwrap(), Equilibria::LineAtCritical);
        for theta in [-3.0, 0.0, 0.3, 4.0] {
            assert!(axis_rate(theta, &crit).abs() < 1e-12);
        }
        let sup = Params::new(0.2, 2.0).unwrap();
        assert_eq!(equilibria(&sup).unwrap(), Equilibria::NoneOffCritical);
        let f0 = crate::dynamics::rhs_reduced(&crate::state::ReducedState::new(0.0, 0.0), &sup).unwrap()[1];
        assert!(f0 < 0.0);
        assert!((f0 - axis_rate(0.0, &sup)).abs() < 1e-14);
        // 1.219 is 3.5e-4 away from γ*(0.2); it is not on the critical line.
        assert_eq!(equilibria(&Params::new(0.2, 1.219).unwrap()).unwrap(), Equilibria::NoneOffCritical);
    }

    fn closed_form_theta_star(p: &Params, h0: f64) -> f64 {
        let a = p.self_coeff();
        let c = (p.alpha() * p.alpha() * p.gamma() / (p.offset_coeff() * a * a)).cbrt();
        (a / (h0 / (c - 1.0))).ln()
    }

    #[test]
    fn theta_star_matches_rearranged_cubic() {
        for (alpha, gamma, h0) in [(0.2, 1.1, 0.1), (0.2, 1.05, 2.0), (0.5, 1.3, 1e-3), (0.9, 2.0, 10.0)] {
            let p = Params::new(alpha, gamma).unwrap();
            let got = theta_star(&p, h0).unwrap();
            let want = closed_form_theta_star(&p, h0);
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn theta_star_is_a_sign_change_of_the_w_rate() {
        let p = Params::new(0.2, 1.1).unwrap();
        let h0 = 0.1;
        let ts = theta_star(&p, h0).unwrap();
        assert!(level_w_rate(ts - 0.1, &p, h0) < 0.0);
        assert!(level_w_rate(ts + 0.1, &p, h0) > 0.0);
        let scale = p.self_coeff() * (-ts).exp();
        assert!(level_w_rate(ts, &p, h0).abs() < 1e-12 * scale);
    }

    #[test]
    fn theta_star_endpoint_sign() {
        let p = Params::new(0.2, 1.1).unwrap();
        let h0 = 0.3;
        let c = p.coupling();
        let h_at_zero = p.offset_coeff() / (c * c) * h0 * h0 * h0;
        assert!(h_at_zero > 0.0);
    }

    #[test]
    fn theta_star_errors() {
        assert!(matches!(theta_star(&Params::new(0.2, 2.0).unwrap(), 1.0), Err(Error::RegimeError(_))));
        assert!(matches!(theta_star(&Params::new(0.2, 1.0).unwrap(), 1.0), Err(Error::RegimeError(_))));
        assert!(matches!(theta_star(&Params::new(0.2, 1.1).unwrap(), 0.0), Err(Error::DomainError(_))));
    }
}
