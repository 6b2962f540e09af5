//! Phase-space coordinates for the full and reduced systems.

use crate::error::{Error, Result};
use crate::math;
use crate::params::Renaming;

/// Radii and axial positions of the two circular filaments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullState {
    pub r1: f64,
    pub z1: f64,
    pub r2: f64,
    pub z2: f64,
}

impl FullState {
    pub const fn new(r1: f64, z1: f64, r2: f64, z2: f64) -> Self {
        Self { r1, z1, r2, z2 }
    }

    /// Checks positivity of the radii and that the circles do not coincide.
    pub fn validate(&self) -> Result<()> {
        if !(self.r1.is_finite() && self.r2.is_finite() && self.z1.is_finite() && self.z2.is_finite()) {
            return Err(Error::InvalidState("non-finite component"));
        }
        if self.r1 <= 0.0 || self.r2 <= 0.0 {
            return Err(Error::InvalidState("radii must be positive"));
        }
        if self.separation_sq() == 0.0 {
            return Err(Error::SeparationZero);
        }
        Ok(())
    }

    /// Axial gap `W = z1 - z2`.
    #[inline]
    pub fn gap(&self) -> f64 {
        self.z1 - self.z2
    }

    /// Squared distance between the filaments in the meridian plane.
    #[inline]
    pub fn separation_sq(&self) -> f64 {
        let dr = self.r1 - self.r2;
        let w = self.gap();
        dr * dr + w * w
    }

    pub fn separation(&self) -> f64 {
        math::sqrt(self.separation_sq())
    }

    /// Applies a filament renaming (swap and reflect `z`).
    pub fn renamed(&self, renaming: Renaming) -> Self {
        match renaming {
            Renaming::Identity => *self,
            Renaming::Swapped { .. } => Self { r1: self.r2, z1: -self.z2, r2: self.r1, z2: -self.z1 },
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.r1, self.z1, self.r2, self.z2]
    }

    pub fn from_array(y: [f64; 4]) -> Self {
        Self { r1: y[0], z1: y[1], r2: y[2], z2: y[3] }
    }
}

/// `(θ, W) = (log r1, z1 - z2)` on the invariant set `d = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub theta: f64,
    pub w: f64,
}

impl ReducedState {
    pub const fn new(theta: f64, w: f64) -> Self {
        Self { theta, w }
    }

    pub fn to_array(&self) -> [f64; 2] {
        [self.theta, self.w]
    }

    pub fn from_array(y: [f64; 2]) -> Self {
        Self { theta: y[0], w: y[1] }
    }

    /// Maps a reduced state through a filament renaming. The normalized ratio
    /// is `1/γ_orig`, so `r1' = r2 = √γ_orig r1`.
    pub fn renamed(&self, renaming: Renaming) -> Self {
        match renaming {
            Renaming::Identity => *self,
            Renaming::Swapped { original_gamma } => Self {
                theta: self.theta + 0.5 * math::ln(original_gamma),
                w: self.w,
            },
        }
    }
}

/// Hyperbolic-angle coordinates on `γ r1² - r2² = d ≠ 0`.
///
/// For `d > 0`: `r1 = (d/γ)^{1/2} cosh θ`, `r2 = d^{1/2} sinh θ`.
/// For `d < 0`: `r1 = (|d|/γ)^{1/2} sinh θ`, `r2 = |d|^{1/2} cosh θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicState {
    pub theta: f64,
    pub w: f64,
    pub d: f64,
}

impl HyperbolicState {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.w.is_finite() && self.d.is_finite()) {
            return Err(Error::InvalidState("non-finite component"));
        }
        if self.d == 0.0 {
            return Err(Error::InvalidState("hyperbolic coordinates need d != 0"));
        }
        if self.theta <= 0.0 {
            return Err(Error::DomainError("hyperbolic angle must be positive"));
        }
        Ok(())
    }

    /// Radii `(r1, r2)` recovered from the hyperbola parametrization.
    pub fn radii(&self, gamma: f64) -> (f64, f64) {
        let scale = math::sqrt(self.d.abs());
        let (c, s) = (math::cosh(self.theta), math::sinh(self.theta));
        let sg = math::sqrt(gamma);
        if self.d > 0.0 {
            (scale / sg * c, scale * s)
        } else {
            (scale / sg * s, scale * c)
        }
    }
}

/// Result of [`crate::dynamics::reduce`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduction {
    Reduced(ReducedState),
    Hyperbolic(HyperbolicState),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(FullState::new(1.0, 0.0, 1.0, 0.0).validate(), Err(Error::SeparationZero));
        assert!(FullState::new(-1.0, 0.0, 1.0, 0.0).validate().is_err());
        assert!(FullState::new(1.0, 0.5, 1.0, 0.0).validate().is_ok());
    }

    #[test]
    fn renaming_twice_is_identity_for_full_states() {
        let s = FullState::new(1.0, 0.25, 2.0, -0.5);
        let r = Renaming::Swapped { original_gamma: 0.5 };
        assert_eq!(s.renamed(r).renamed(r), s);
    }
}
