//! The collision classification of reduced initial data.

use super::threshold::{regime, theta_star, Regime};
use crate::dynamics::hamiltonian;
use crate::error::{Error, Result};
use crate::math;
use crate::params::Params;
use crate::state::ReducedState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// `γ = 1`, `W0 > 0`.
    HeadOnCollision,
    /// `γ ∈ (1, γ*]` and the initial data satisfy the collision conditions.
    AsymmetricCollision,
    /// `γ = 1`, `W0 < 0`.
    NoCollisionGamma1,
    /// `γ ∈ (1, γ*)` and the collision conditions fail.
    NoCollisionSubcritical,
    /// `γ = γ*`, `W0 < 0`.
    NoCollisionCritical,
    /// `γ > γ*`: global solution with `W → -∞`.
    GlobalPassThrough,
    /// `γ = γ*`, `W0 = 0`: the configuration is an equilibrium.
    EquilibriumRest,
}

impl Verdict {
    pub fn is_collision(&self) -> bool {
        matches!(self, Verdict::HeadOnCollision | Verdict::AsymmetricCollision)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::HeadOnCollision => "HeadOnCollision",
            Verdict::AsymmetricCollision => "AsymmetricCollision",
            Verdict::NoCollisionGamma1 => "NoCollisionGamma1",
            Verdict::NoCollisionSubcritical => "NoCollisionSubcritical",
            Verdict::NoCollisionCritical => "NoCollisionCritical",
            Verdict::GlobalPassThrough => "GlobalPassThrough",
            Verdict::EquilibriumRest => "EquilibriumRest",
        }
    }
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionClass {
    pub verdict: Verdict,
    pub regime: Regime,
    pub h0: f64,
    pub gamma_star: f64,
    /// Present exactly when `γ ∈ (1, γ*)` and `H0 > 0`.
    pub theta_star: Option<f64>,
}

/// Threshold under which `H0` counts as zero, relative to the self-induction term.
pub fn h0_zero_tol(theta0: f64, p: &Params) -> f64 {
    1e-12 * (1.0 + p.self_coeff() * math::exp(-theta0))
}

pub fn is_h0_zero(h0: f64, theta0: f64, p: &Params) -> bool {
    h0.abs() <= h0_zero_tol(theta0, p)
}

/// Classifies the motion started from `rs0`.
pub fn classify(rs0: &ReducedState, p: &Params) -> Result<MotionClass> {
    if !(rs0.theta.is_finite() && rs0.w.is_finite()) {
        return Err(Error::InvalidState("non-finite reduced state"));
    }
    let (regime, gamma_star) = regime(p)?;
    if regime == Regime::UnitRatio && rs0.w == 0.0 {
        return Err(Error::OnSingularLine);
    }
    let h0 = hamiltonian(rs0, p)?;
    let w0 = rs0.w;
    let mut theta_star_value = None;
    let verdict = match regime {
        Regime::UnitRatio => {
            if w0 > 0.0 {
                Verdict::HeadOnCollision
            } else {
                Verdict::NoCollisionGamma1
            }
        }
        Regime::Subcritical => {
            let h0_positive = h0 > 0.0 && !is_h0_zero(h0, rs0.theta, p);
            if h0_positive {
                theta_star_value = Some(theta_star(p, h0)?);
            }
            let collides = w0 > 0.0
                && match theta_star_value {
                    None => true,
                    Some(ts) => rs0.theta <= ts,
                };
            if collides {
                Verdict::AsymmetricCollision
            } else {
                Verdict::NoCollisionSubcritical
            }
        }
        Regime::Critical => {
            if w0 > 0.0 {
                Verdict::AsymmetricCollision
            } else if w0 == 0.0 {
                Verdict::EquilibriumRest
            } else {
                Verdict::NoCollisionCritical
            }
        }
        Regime::Supercritical => Verdict::GlobalPassThrough,
    };
    Ok(MotionClass { verdict, regime, h0, gamma_star, theta_star: theta_star_value })
}
