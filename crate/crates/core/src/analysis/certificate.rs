//! Lower bound on the filament separation along a `d ≠ 0` level set.
//!
//! On the level set `V(θ) + α√γ/sep = H0`, so `sep = α√γ/(H0 - V(θ))`. The
//! potential `V` is increasing in `θ`, hence `sep` is increasing in `θ` and
//! its minimum over the connected component through the initial state sits at
//! the component's left end, where `W = 0`.

use crate::dynamics::{hamiltonian_hyperbolic, hyperbolic_potential, hyperbolic_separation_sq};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::state::HyperbolicState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoCollisionCertificate {
    pub h_level: f64,
    pub min_separation: f64,
    /// Left end of the `θ`-range swept by the level-set component.
    pub theta_min: f64,
}

/// `W²` on the level set as a function of `θ`; negative where the level set
/// has no point with that angle.
fn level_w_sq(theta: f64, d: f64, h0: f64, p: &Params) -> Result<f64> {
    let gap = h0 - hyperbolic_potential(theta, d, p)?;
    if !(gap > 0.0) {
        return Ok(f64::NEG_INFINITY);
    }
    let sep = p.coupling() / gap;
    let dr_sq = hyperbolic_separation_sq(&HyperbolicState { theta, w: 0.0, d }, p);
    Ok(sep * sep - dr_sq)
}

pub fn no_collision_certificate(hs0: &HyperbolicState, p: &Params) -> Result<NoCollisionCertificate> {
    hs0.validate()?;
    let h0 = hamiltonian_hyperbolic(hs0, p)?;
    if !h0.is_finite() {
        return Err(Error::SeparationZero);
    }
    let d = hs0.d;
    // March left until the level set leaves the strip; near θ = 0 the steps
    // shrink geometrically because V → -∞ there.
    let mut inside = hs0.theta;
    let mut outside = None;
    let base_step = 1e-3 * f64::max(hs0.theta, 1.0);
    while inside > f64::MIN_POSITIVE {
        let next = inside - f64::min(base_step, 0.5 * inside);
        if level_w_sq(next, d, h0, p)? < 0.0 {
            outside = Some(next);
            break;
        }
        inside = next;
    }
    let mut outside = outside.ok_or(Error::RootNotFound("level set reaches theta = 0"))?;
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid <= outside || mid >= inside || inside - outside <= 1e-15 * inside {
            break;
        }
        if level_w_sq(mid, d, h0, p)? < 0.0 {
            outside = mid;
        } else {
            inside = mid;
        }
    }
    // Evaluating at the outer point keeps the value below the true minimum.
    let gap = h0 - hyperbolic_potential(outside, d, p)?;
    let min_separation = p.coupling() / gap;
    if !(min_separation > 0.0 && min_separation.is_finite()) {
        return Err(Error::DomainError("non-positive separation bound"));
    }
    Ok(NoCollisionCertificate { h_level: h0, min_separation, theta_min: outside })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::reduce;
    use crate::state::{FullState, Reduction};

    fn hyperbolic(s: FullState, p: &Params) -> HyperbolicState {
        match reduce(&s, p, 1e-9).unwrap() {
            Reduction::Hyperbolic(h) => h,
            Reduction::Reduced(_) => panic!("expected d != 0"),
        }
    }

    #[test]
    fn positive_for_both_signs_of_d() {
        let p = Params::new(0.3, 1.5).unwrap();
        for s in [FullState::new(1.2, 0.4, 1.0, 0.0), FullState::new(0.6, -0.2, 1.3, 0.0)] {
            let hs = hyperbolic(s, &p);
            let cert = no_collision_certificate(&hs, &p).unwrap();
            assert!(cert.min_separation > 0.0);
            assert!(cert.min_separation <= s.separation() * (1.0 + 1e-12));
            assert!(cert.theta_min < hs.theta);
        }
    }

    #[test]
    fn bound_is_attained_at_the_turning_point() {
        // Start exactly at W = 0 left of the collision angle: sep0 = ΔR is the minimum.
        let p = Params::new(0.3, 1.5).unwrap();
        let hs = HyperbolicState { theta: 0.3, w: 0.0, d: 1.0 };
        let cert = no_collision_certificate(&hs, &p).unwrap();
        let sep0 = hyperbolic_separation_sq(&hs, &p).sqrt();
        assert!((cert.min_separation - sep0).abs() < 1e-9 * sep0, "{} vs {sep0}", cert.min_separation);
    }

    #[test]
    fn higher_levels_sit_closer_to_collision() {
        let p = Params::new(0.3, 1.5).unwrap();
        let mut last = f64::INFINITY;
        let mut last_h = f64::NEG_INFINITY;
        for w in [1.0, 0.5, 0.2, 0.1, 0.05] {
            let hs = HyperbolicState { theta: 0.6, w, d: 1.0 };
            let cert = no_collision_certificate(&hs, &p).unwrap();
            assert!(cert.h_level > last_h);
            assert!(cert.min_separation <= last);
            last = cert.min_separation;
            last_h = cert.h_level;
        }
    }
}
