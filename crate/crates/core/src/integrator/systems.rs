//! The three vector fields as integrable systems.

use crate::dynamics::{
    conserved_d, hamiltonian, hamiltonian_hyperbolic, hyperbolic_potential, rhs_full, rhs_hyperbolic,
    rhs_reduced,
};
use crate::error::Result;
use crate::math;
use crate::params::Params;
use crate::state::{FullState, HyperbolicState, ReducedState};

/// An autonomous ODE on `R^N` with a conserved quantity.
pub trait OdeSystem<const N: usize> {
    /// Name of the conserved quantity, used as the drift key.
    const INVARIANT: &'static str;

    fn rhs(&self, y: &[f64; N]) -> Result<[f64; N]>;

    /// `log r1`, or the hyperbolic angle.
    fn theta(&self, y: &[f64; N]) -> f64;

    /// The axial gap `z1 - z2`.
    fn w(&self, y: &[f64; N]) -> f64;

    /// Value of the conserved quantity and the magnitude of its largest term,
    /// or `None` where it is undefined.
    fn invariant(&self, y: &[f64; N]) -> Option<(f64, f64)>;
}

/// `(r1, z1, r2, z2)`.
#[derive(Debug, Clone, Copy)]
pub struct FullSystem {
    pub params: Params,
}

impl OdeSystem<4> for FullSystem {
    const INVARIANT: &'static str = "d";

    fn rhs(&self, y: &[f64; 4]) -> Result<[f64; 4]> {
        rhs_full(&FullState::from_array(*y), &self.params)
    }

    fn theta(&self, y: &[f64; 4]) -> f64 {
        math::ln(y[0])
    }

    fn w(&self, y: &[f64; 4]) -> f64 {
        y[1] - y[3]
    }

    fn invariant(&self, y: &[f64; 4]) -> Option<(f64, f64)> {
        let s = FullState::from_array(*y);
        let scale = self.params.gamma() * s.r1 * s.r1 + s.r2 * s.r2;
        Some((conserved_d(&s, &self.params), scale))
    }
}

/// `(θ, W)` on `d = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ReducedSystem {
    pub params: Params,
}

impl OdeSystem<2> for ReducedSystem {
    const INVARIANT: &'static str = "H";

    fn rhs(&self, y: &[f64; 2]) -> Result<[f64; 2]> {
        rhs_reduced(&ReducedState::from_array(*y), &self.params)
    }

    fn theta(&self, y: &[f64; 2]) -> f64 {
        y[0]
    }

    fn w(&self, y: &[f64; 2]) -> f64 {
        y[1]
    }

    fn invariant(&self, y: &[f64; 2]) -> Option<(f64, f64)> {
        let p = &self.params;
        let h = hamiltonian(&ReducedState::from_array(*y), p).ok()?;
        let self_term = p.self_coeff() * math::exp(-y[0]);
        let s = p.offset_coeff() * math::exp(2.0 * y[0]) + y[1] * y[1];
        Some((h, self_term + p.coupling() / math::sqrt(s)))
    }
}

/// `(θ, W)` on the hyperbola `γ r1² - r2² = d`.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicSystem {
    pub params: Params,
    pub d: f64,
}

impl HyperbolicSystem {
    fn state(&self, y: &[f64; 2]) -> HyperbolicState {
        HyperbolicState { theta: y[0], w: y[1], d: self.d }
    }
}

impl OdeSystem<2> for HyperbolicSystem {
    const INVARIANT: &'static str = "H";

    fn rhs(&self, y: &[f64; 2]) -> Result<[f64; 2]> {
        rhs_hyperbolic(&self.state(y), &self.params)
    }

    fn theta(&self, y: &[f64; 2]) -> f64 {
        y[0]
    }

    fn w(&self, y: &[f64; 2]) -> f64 {
        y[1]
    }

    fn invariant(&self, y: &[f64; 2]) -> Option<(f64, f64)> {
        let hs = self.state(y);
        let h = hamiltonian_hyperbolic(&hs, &self.params).ok()?;
        let pot = hyperbolic_potential(y[0], self.d, &self.params).ok()?;
        h.is_finite().then(|| (h, pot.abs() + (h - pot).abs()))
    }
}
