//! Vector fields, Hamiltonians and coordinate reductions for a coaxial pair of
//! circular vortex filaments with opposite-sign circulations.
//!
//! Time is the rescaled time of the model (physical time multiplied by Γ2).
//! Filament `X` has radius `r1`, position `z1` and circulation ratio `γ`
//! relative to filament `Y` (radius `r2`, position `z2`).

use crate::error::{Error, Result};
use crate::math;
use crate::params::Params;
use crate::state::{FullState, HyperbolicState, ReducedState, Reduction};

/// Right-hand side `(ṙ1, ż1, ṙ2, ż2)` of the four-dimensional filament system.
pub fn rhs_full(s: &FullState, p: &Params) -> Result<[f64; 4]> {
    let sep_sq = s.separation_sq();
    if sep_sq == 0.0 {
        return Err(Error::SeparationZero);
    }
    let denom = sep_sq * math::sqrt(sep_sq);
    let (alpha, gamma) = (p.alpha(), p.gamma());
    let w = s.gap();
    let dr = s.r1 - s.r2;
    Ok([
        -alpha * s.r2 * w / denom,
        -gamma / s.r1 + alpha * s.r2 * dr / denom,
        -alpha * gamma * s.r1 * w / denom,
        1.0 / s.r2 + alpha * gamma * s.r1 * dr / denom,
    ])
}

/// The conserved quantity `d = γ r1² - r2²`.
#[inline]
pub fn conserved_d(s: &FullState, p: &Params) -> f64 {
    p.gamma() * s.r1 * s.r1 - s.r2 * s.r2
}

/// Scale-relative threshold below which `d` is treated as zero.
pub fn default_tol_d(s: &FullState, p: &Params) -> f64 {
    1e-9 * f64::max(1.0, p.gamma() * s.r1 * s.r1)
}

const INVERSION_RTOL: f64 = 1e-9;

/// Reduces a full state to the `d = 0` coordinates `(log r1, z1 - z2)` or, when
/// `|d| > tol_d`, to hyperbolic-angle coordinates on `γ r1² - r2² = d`.
pub fn reduce(s: &FullState, p: &Params, tol_d: f64) -> Result<Reduction> {
    s.validate()?;
    if !(tol_d > 0.0) {
        return Err(Error::DomainError("tol_d must be positive"));
    }
    let d = conserved_d(s, p);
    if d.abs() <= tol_d {
        return Ok(Reduction::Reduced(ReducedState::new(math::ln(s.r1), s.gap())));
    }
    let sg = p.sqrt_gamma();
    let root = math::sqrt(d.abs());
    // asinh keeps the inversion well conditioned when |d| is small relative to r².
    let theta = if d > 0.0 {
        math::asinh(s.r2 / root)
    } else {
        math::asinh(sg * s.r1 / root)
    };
    let hs = HyperbolicState { theta, w: s.gap(), d };
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InversionFailure);
    }
    let (r1, r2) = hs.radii(p.gamma());
    if (r1 - s.r1).abs() > INVERSION_RTOL * s.r1 || (r2 - s.r2).abs() > INVERSION_RTOL * s.r2 {
        return Err(Error::InversionFailure);
    }
    Ok(Reduction::Hyperbolic(hs))
}

/// Lifts a reduced state back to radii and positions, placing `z2 = 0`.
pub fn lift_reduced(rs: &ReducedState, p: &Params) -> FullState {
    let r1 = math::exp(rs.theta);
    FullState::new(r1, rs.w, p.sqrt_gamma() * r1, 0.0)
}

/// Lifts a hyperbolic state back to radii and positions, placing `z2 = 0`.
pub fn lift_hyperbolic(hs: &HyperbolicState, p: &Params) -> FullState {
    let (r1, r2) = hs.radii(p.gamma());
    FullState::new(r1, hs.w, r2, 0.0)
}

/// Right-hand side `(θ̇, Ẇ)` of the reduced system on `d = 0`.
pub fn rhs_reduced(rs: &ReducedState, p: &Params) -> Result<[f64; 2]> {
    let (theta, w) = (rs.theta, rs.w);
    if p.is_unit_ratio() {
        if w == 0.0 {
            return Err(Error::OnSingularLine);
        }
        let aw = w.abs();
        return Ok([-p.alpha() * w / (aw * aw * aw), -2.0 * math::exp(-theta)]);
    }
    let e2 = math::exp(2.0 * theta);
    let k = p.offset_coeff();
    let sep_sq = k * e2 + w * w;
    if sep_sq == 0.0 {
        return Err(Error::SeparationZero);
    }
    let denom = sep_sq * math::sqrt(sep_sq);
    let c = p.coupling();
    Ok([-c * w / denom, -p.self_coeff() * math::exp(-theta) + c * k * e2 / denom])
}

/// The Hamiltonian of the reduced system,
/// `H = -(γ + γ^{-1/2}) e^{-θ} + α√γ / ((√γ-1)² e^{2θ} + W²)^{1/2}`.
pub fn hamiltonian(rs: &ReducedState, p: &Params) -> Result<f64> {
    let (theta, w) = (rs.theta, rs.w);
    if p.is_unit_ratio() {
        if w == 0.0 {
            return Err(Error::Divergent);
        }
        return Ok(-2.0 * math::exp(-theta) + p.alpha() / w.abs());
    }
    let sep_sq = p.offset_coeff() * math::exp(2.0 * theta) + w * w;
    if sep_sq == 0.0 {
        return Err(Error::Divergent);
    }
    Ok(-p.self_coeff() * math::exp(-theta) + p.coupling() / math::sqrt(sep_sq))
}

/// Level-set quantities shared by the `W`-eliminated forms.
struct LevelSet {
    /// `H0 + (γ + γ^{-1/2}) e^{-θ}`, equal to `α√γ / |separation|` on the level set.
    q: f64,
    /// `α²γ - (√γ-1)² e^{2θ} q²`, equal to `q² W²`.
    bracket: f64,
}

fn level_set(theta: f64, p: &Params, h0: f64) -> Result<LevelSet> {
    let q = h0 + p.self_coeff() * math::exp(-theta);
    let c = p.coupling();
    let lead = c * c;
    let off = p.offset_coeff() * math::exp(2.0 * theta) * q * q;
    let bracket = lead - off;
    if !(q > 0.0) {
        return Err(Error::OffLevelSet { bracket });
    }
    let tol = 1e-12 * f64::max(lead, off);
    if bracket < -tol || !bracket.is_finite() {
        return Err(Error::OffLevelSet { bracket });
    }
    Ok(LevelSet { q, bracket: bracket.max(0.0) })
}

/// The reduced vector field with `W` eliminated through the level set `H = h0`,
/// valid on the `W > 0` branch.
pub fn rhs_reduced_alt(theta: f64, p: &Params, h0: f64) -> Result<[f64; 2]> {
    let LevelSet { q, bracket } = level_set(theta, p, h0)?;
    let c = p.coupling();
    let a2g = c * c;
    let theta_dot = -q * q * math::sqrt(bracket) / a2g;
    let w_dot = -p.self_coeff() * math::exp(-theta) + p.offset_coeff() * q * q * q * math::exp(2.0 * theta) / a2g;
    Ok([theta_dot, w_dot])
}

/// Non-negative `W` on the level set `H = h0` at angle `theta`.
pub fn w_from_theta(theta: f64, p: &Params, h0: f64) -> Result<f64> {
    let LevelSet { q, bracket } = level_set(theta, p, h0)?;
    Ok(math::sqrt(bracket) / q)
}

/// Hyperbolic sine and cosine assigned to `(r1, r2)`-like roles.
///
/// Returns `(u, v)` with `r1 = (|d|/γ)^{1/2} u` and `r2 = |d|^{1/2} v`.
fn hyperbolic_roles(hs: &HyperbolicState) -> (f64, f64) {
    let (c, s) = (math::cosh(hs.theta), math::sinh(hs.theta));
    if hs.d > 0.0 {
        (c, s)
    } else {
        (s, c)
    }
}

/// Squared filament separation in hyperbolic coordinates.
pub fn hyperbolic_separation_sq(hs: &HyperbolicState, p: &Params) -> f64 {
    let (u, v) = hyperbolic_roles(hs);
    let dr = u - p.sqrt_gamma() * v;
    hs.d.abs() / p.gamma() * dr * dr + hs.w * hs.w
}

/// Self-induction part of the hyperbolic Hamiltonian (depends on `θ` only).
pub fn hyperbolic_potential(theta: f64, d: f64, p: &Params) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::DomainError("log(tanh(theta/2)) needs theta > 0"));
    }
    let t = math::tanh(0.5 * theta);
    let g32 = p.gamma() * p.sqrt_gamma();
    let (arc, log) = (2.0 * math::atan(t), math::ln(t));
    let bracket = if d > 0.0 { g32 * arc + log } else { arc + g32 * log };
    Ok(bracket / math::sqrt(d.abs()))
}

/// Hamiltonian of the reduced system on `d ≠ 0`.
pub fn hamiltonian_hyperbolic(hs: &HyperbolicState, p: &Params) -> Result<f64> {
    if hs.d == 0.0 {
        return Err(Error::DomainError("hyperbolic hamiltonian needs d != 0"));
    }
    let pot = hyperbolic_potential(hs.theta, hs.d, p)?;
    let sep_sq = hyperbolic_separation_sq(hs, p);
    if sep_sq == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(pot + p.coupling() / math::sqrt(sep_sq))
}

/// Right-hand side `(θ̇, Ẇ)` in hyperbolic coordinates.
pub fn rhs_hyperbolic(hs: &HyperbolicState, p: &Params) -> Result<[f64; 2]> {
    if hs.d == 0.0 {
        return Err(Error::DomainError("hyperbolic system needs d != 0"));
    }
    if !(hs.theta > 0.0) {
        return Err(Error::DomainError("hyperbolic angle must be positive"));
    }
    let sep_sq = hyperbolic_separation_sq(hs, p);
    if sep_sq == 0.0 {
        return Err(Error::SeparationZero);
    }
    let denom = sep_sq * math::sqrt(sep_sq);
    let (c, s) = (math::cosh(hs.theta), math::sinh(hs.theta));
    let sg = p.sqrt_gamma();
    let g32 = p.gamma() * sg;
    let ad = hs.d.abs();
    let self_term = if hs.d > 0.0 { g32 / c + 1.0 / s } else { g32 / s + 1.0 / c };
    let theta_dot = -p.coupling() * hs.w / denom;
    let w_dot = -self_term / math::sqrt(ad) + p.alpha() * ad * (s - sg * c) * (c - sg * s) / (sg * denom);
    Ok([theta_dot, w_dot])
}

#[derive(Clone, Copy)]
struct Vec3([f64; 3]);

impl Vec3 {
    fn cross(self, o: Vec3) -> Vec3 {
        let (a, b) = (self.0, o.0);
        Vec3([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])
    }
    fn norm(self) -> f64 {
        math::sqrt(self.dot(self))
    }
    fn dot(self, o: Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
    fn scale(self, k: f64) -> Vec3 {
        Vec3([k * self.0[0], k * self.0[1], k * self.0[2]])
    }
}

/// A circle `ξ ↦ (r cos ξ, r sin ξ, z)` and its first two ξ-derivatives.
fn circle(r: f64, z: f64, xi: f64) -> (Vec3, Vec3, Vec3) {
    let (c, s) = (math::cos(xi), math::sin(xi));
    (Vec3([r * c, r * s, z]), Vec3([-r * s, r * c, 0.0]), Vec3([-r * c, -r * s, 0.0]))
}

/// Maximum pointwise mismatch between the filament PDE velocity evaluated on
/// the two circles and the velocity implied by [`rhs_full`].
///
/// The circular ansatz reduces the PDE exactly, so this is zero up to round-off.
pub fn ansatz_residual(s: &FullState, p: &Params, n_samples: usize) -> Result<f64> {
    ansatz_residual_with_offset(s, p, n_samples, 0.0)
}

/// [`ansatz_residual`] with sample points `ξ_j = ξ0 + 2πj/n`.
pub fn ansatz_residual_with_offset(s: &FullState, p: &Params, n_samples: usize, xi0: f64) -> Result<f64> {
    if n_samples < 4 {
        return Err(Error::DomainError("ansatz check needs at least 4 samples"));
    }
    let rates = rhs_full(s, p)?;
    let beta = -p.gamma();
    let alpha = p.alpha();
    let mut worst = 0.0f64;
    for j in 0..n_samples {
        let xi = xi0 + 2.0 * core::f64::consts::PI * (j as f64) / (n_samples as f64);
        let (x, x1, x2) = circle(s.r1, s.z1, xi);
        let (y, y1, y2) = circle(s.r2, s.z2, xi);
        let diff = x.sub(y);
        let dist = diff.norm();
        let dist3 = dist * dist * dist;
        let lia_x = x1.cross(x2).scale(1.0 / (x1.norm() * x1.norm() * x1.norm()));
        let lia_y = y1.cross(y2).scale(1.0 / (y1.norm() * y1.norm() * y1.norm()));
        let vx = lia_x.scale(beta).sub(y1.cross(diff).scale(alpha / dist3));
        let vy = lia_y.sub(x1.cross(diff.scale(-1.0)).scale(alpha * beta / dist3));

        let (c, sn) = (math::cos(xi), math::sin(xi));
        let ansatz_x = Vec3([rates[0] * c, rates[0] * sn, rates[1]]);
        let ansatz_y = Vec3([rates[2] * c, rates[2] * sn, rates[3]]);
        let ex = vx.sub(ansatz_x).norm();
        let ey = vy.sub(ansatz_y).norm();
        worst = worst.max(ex).max(ey);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, gamma: f64) -> Params {
        Params::new(alpha, gamma).unwrap()
    }

    #[test]
    fn overlapping_filaments_are_rejected() {
        let p = params(0.2, 1.0);
        assert_eq!(rhs_full(&FullState::new(1.0, 0.0, 1.0, 0.0), &p), Err(Error::SeparationZero));
    }

    #[test]
    fn symmetric_pair_contracts_equally() {
        let (alpha, h) = (0.3, 0.7);
        let p = params(alpha, 1.0);
        let v = rhs_full(&FullState::new(1.0, h, 1.0, 0.0), &p).unwrap();
        assert!((v[0] + alpha / (h * h)).abs() < 1e-15);
        assert!((v[2] + alpha / (h * h)).abs() < 1e-15);
    }

    #[test]
    fn conserved_d_arithmetic() {
        assert_eq!(conserved_d(&FullState::new(1.0, 0.0, 1.2, 0.0), &params(0.2, 1.44)), 1.44 - 1.44);
        assert!(conserved_d(&FullState::new(1.0, 0.0, 1.2, 0.0), &params(0.2, 1.44)).abs() < 1e-15);
        assert_eq!(conserved_d(&FullState::new(2.0, 0.0, 1.0, 0.0), &params(0.2, 1.0)), 3.0);
    }

    #[test]
    fn reduce_selects_branches() {
        let p = params(0.2, 4.0);
        let s = FullState::new(1.0, 1.0, 2.0, 0.0);
        match reduce(&s, &p, default_tol_d(&s, &p)).unwrap() {
            Reduction::Reduced(rs) => {
                assert_eq!(rs.theta, 0.0);
                assert_eq!(rs.w, 1.0);
            }
            other => panic!("expected reduced, got {other:?}"),
        }
        let p = params(0.2, 1.0);
        let s = FullState::new(2.0, 0.0, 1.0, 0.0);
        match reduce(&s, &p, default_tol_d(&s, &p)).unwrap() {
            Reduction::Hyperbolic(hs) => {
                assert_eq!(hs.d, 3.0);
                assert_eq!(hs.w, 0.0);
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }
    }

    #[test]
    fn reduced_field_unit_ratio() {
        let v = rhs_reduced(&ReducedState::new(0.0, 1.0), &params(0.5, 1.0)).unwrap();
        assert_eq!(v, [-0.5, -2.0]);
        assert_eq!(rhs_reduced(&ReducedState::new(0.0, 0.0), &params(0.5, 1.0)), Err(Error::OnSingularLine));
    }

    #[test]
    fn theta_rate_vanishes_on_axis() {
        for gamma in [1.01, 1.3, 2.0, 7.5] {
            let v = rhs_reduced(&ReducedState::new(0.4, 0.0), &params(0.2, gamma)).unwrap();
            assert_eq!(v[0], 0.0);
        }
    }

    #[test]
    fn unit_ratio_hamiltonian() {
        let p = params(0.5, 1.0);
        assert_eq!(hamiltonian(&ReducedState::new(0.0, 0.25), &p).unwrap(), 0.0);
        assert_eq!(hamiltonian(&ReducedState::new(0.0, 0.0), &p), Err(Error::Divergent));
        let near = hamiltonian(&ReducedState::new(0.0, 1e-300), &p).unwrap();
        assert!(near > 1e299);
    }

    #[test]
    fn level_set_boundary_and_unit_ratio_closed_form() {
        let p = params(0.2, 1.5);
        // Choose h0 so that the bracket vanishes at theta = 0.3.
        let theta: f64 = 0.3;
        let q = p.coupling() / (p.offset_coeff().sqrt() * theta.exp());
        let h0 = q - p.self_coeff() * (-theta).exp();
        assert!(w_from_theta(theta, &p, h0).unwrap() < 1e-6);

        let p = params(0.4, 1.0);
        for (theta, h0) in [(0.0f64, -1.0), (1.0, 0.5), (-0.5, 0.0)] {
            let w = w_from_theta(theta, &p, h0).unwrap();
            let expected = 0.4 / (h0 + 2.0 * (-theta).exp());
            assert!((w - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn off_level_set_is_rejected() {
        let p = params(0.2, 2.0);
        // Large positive h0 at large theta makes the offset term dominate.
        assert!(matches!(rhs_reduced_alt(3.0, &p, 5.0), Err(Error::OffLevelSet { .. })));
        assert!(matches!(w_from_theta(3.0, &p, 5.0), Err(Error::OffLevelSet { .. })));
        // q <= 0
        assert!(matches!(w_from_theta(0.0, &p, -10.0), Err(Error::OffLevelSet { .. })));
    }

    #[test]
    fn hyperbolic_domain() {
        let p = params(0.2, 1.5);
        let hs = HyperbolicState { theta: -0.1, w: 1.0, d: 1.0 };
        assert!(matches!(hamiltonian_hyperbolic(&hs, &p), Err(Error::DomainError(_))));
        let hs = HyperbolicState { theta: 0.0, w: 1.0, d: 1.0 };
        assert!(matches!(hamiltonian_hyperbolic(&hs, &p), Err(Error::DomainError(_))));
    }

    #[test]
    fn hyperbolic_hamiltonian_diverges_at_collision_point() {
        let p = params(0.2, 1.5);
        let theta_c = (1.0 / p.sqrt_gamma()).atanh();
        let mut last = f64::NEG_INFINITY;
        for k in 1..8 {
            let eps = 10f64.powi(-k);
            let hs = HyperbolicState { theta: theta_c + eps, w: eps, d: 1.0 };
            let h = hamiltonian_hyperbolic(&hs, &p).unwrap();
            assert!(h > last);
            last = h;
        }
        assert!(last > 1e5);
    }

    #[test]
    fn hyperbolic_rhs_matches_full_rhs() {
        // θ̇ and Ẇ from the chain rule on the full system.
        for (gamma, s) in [
            (1.3, FullState::new(1.4, 0.3, 0.9, -0.2)),
            (1.0, FullState::new(0.7, 0.1, 1.3, 0.5)),
            (2.5, FullState::new(0.5, -0.4, 1.1, 0.2)),
        ] {
            let p = params(0.25, gamma);
            let Reduction::Hyperbolic(hs) = reduce(&s, &p, default_tol_d(&s, &p)).unwrap() else {
                panic!("expected d != 0");
            };
            let full = rhs_full(&s, &p).unwrap();
            let hyp = rhs_hyperbolic(&hs, &p).unwrap();
            // r1 = a u(θ): ṙ1 = a u'(θ) θ̇
            let a = (hs.d.abs() / gamma).sqrt();
            let du = if hs.d > 0.0 { hs.theta.sinh() } else { hs.theta.cosh() };
            assert!((full[0] - a * du * hyp[0]).abs() < 1e-12, "{full:?} {hyp:?}");
            assert!((full[1] - full[3] - hyp[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn ansatz_residual_rejects_coarse_sampling() {
        let p = params(0.2, 1.2);
        assert!(ansatz_residual(&FullState::new(1.0, 0.5, 1.1, 0.0), &p, 3).is_err());
    }

    #[test]
    fn ansatz_residual_symmetric_pair() {
        let p = params(0.2, 1.0);
        let r = ansatz_residual(&FullState::new(1.0, 0.5, 1.0, -0.25), &p, 16).unwrap();
        assert!(r < 1e-10);
    }
}
