//! Model constants.

use crate::error::{Error, Result};
use crate::math;

/// Interaction strength `alpha` and circulation ratio `gamma = |Γ1/Γ2|`.
///
/// Construction enforces `alpha ∈ (0, 1)` and `gamma ≥ 1`. Configurations with
/// `gamma < 1` are brought into range by [`Params::normalize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    alpha: f64,
    gamma: f64,
}

impl Params {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParams("alpha must lie in (0, 1)"));
        }
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(Error::InvalidParams("gamma must be finite and >= 1"));
        }
        Ok(Self { alpha, gamma })
    }

    /// Accepts any positive `gamma`. For `gamma < 1` the filaments are renamed
    /// and the returned [`Renaming`] says how states and times map over.
    pub fn normalize(alpha: f64, gamma: f64) -> Result<(Self, Renaming)> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParams("gamma must be finite and positive"));
        }
        if gamma < 1.0 {
            Ok((Self::new(alpha, 1.0 / gamma)?, Renaming::Swapped { original_gamma: gamma }))
        } else {
            Ok((Self::new(alpha, gamma)?, Renaming::Identity))
        }
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `gamma == 1` is handled by dedicated formulas, never as a limit.
    #[inline]
    pub fn is_unit_ratio(&self) -> bool {
        self.gamma == 1.0
    }

    #[inline]
    pub fn sqrt_gamma(&self) -> f64 {
        math::sqrt(self.gamma)
    }

    /// Self-induction coefficient `γ + γ^{-1/2}`.
    #[inline]
    pub fn self_coeff(&self) -> f64 {
        self.gamma + 1.0 / self.sqrt_gamma()
    }

    /// Radial offset coefficient `(√γ - 1)^2`.
    #[inline]
    pub fn offset_coeff(&self) -> f64 {
        let s = self.sqrt_gamma() - 1.0;
        s * s
    }

    /// Interaction coefficient `α √γ`.
    #[inline]
    pub fn coupling(&self) -> f64 {
        self.alpha * self.sqrt_gamma()
    }
}

/// How a `gamma < 1` input was mapped onto the normalized problem.
///
/// Renaming the filaments with `z -> -z` maps the system with ratio `γ` onto
/// the one with `1/γ`, with rescaled time `t' = γ t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Renaming {
    Identity,
    Swapped { original_gamma: f64 },
}

impl Renaming {
    pub fn is_swapped(&self) -> bool {
        matches!(self, Renaming::Swapped { .. })
    }

    /// Factor converting original times to normalized times.
    pub fn time_scale(&self) -> f64 {
        match *self {
            Renaming::Identity => 1.0,
            Renaming::Swapped { original_gamma } => original_gamma,
        }
    }
}
