//! Collision times: exact values where the reduced system integrates in closed
//! form, comparison-principle upper bounds elsewhere.

use alloc::collections::BTreeMap;

use super::classify::{classify, is_h0_zero};
use super::threshold::Regime;
use crate::error::{Error, Result};
use crate::math;
use crate::params::Params;
use crate::state::ReducedState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    Exact,
    /// Exact value obtained from an implicit closed form.
    ImplicitRoot,
    UpperBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaTag {
    Gamma1H0Zero,
    Gamma1H0Nonzero,
    SubcriticalH0Zero,
    SubcriticalH0Negative,
    SubcriticalH0Positive,
    Critical,
}

impl FormulaTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaTag::Gamma1H0Zero => "Gamma1_H0Zero",
            FormulaTag::Gamma1H0Nonzero => "Gamma1_H0Nonzero",
            FormulaTag::SubcriticalH0Zero => "Subcritical_H0Zero",
            FormulaTag::SubcriticalH0Negative => "Subcritical_H0Negative",
            FormulaTag::SubcriticalH0Positive => "Subcritical_H0Positive",
            FormulaTag::Critical => "Critical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionTimeEstimate {
    pub kind: EstimateKind,
    /// `T_max`, or an upper bound on it when `kind` is `UpperBound`.
    pub value: f64,
    pub formula: FormulaTag,
    /// Named constants used by the branch (`m0`..`m3`, `u0`, `v0`, ...).
    pub constants: BTreeMap<&'static str, f64>,
    /// Value of the commonly printed, uncorrected closed form for this branch,
    /// when it differs from `value`.
    pub uncorrected_value: Option<f64>,
}

/// `ln(1 + x) - x`, accurate for small `x`.
fn log1p_minus(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        // -x²/2 + x³/3 - x⁴/4
        let x2 = x * x;
        x2 * (-0.5 + x * (1.0 / 3.0 - 0.25 * x))
    } else {
        math::ln_1p(x) - x
    }
}

/// `log((v+1)/(v-1)) - 2v/(v²-1)` for `v > 1`.
fn critical_kernel(v: f64) -> f64 {
    let z = 1.0 / v;
    if z < 1e-2 {
        // -Σ 4n/(2n+1) z^{2n+1}
        let z2 = z * z;
        let mut term = z * z2;
        let mut acc = 0.0;
        for n in 1..20 {
            let nf = n as f64;
            acc -= 4.0 * nf / (2.0 * nf + 1.0) * term;
            term *= z2;
        }
        acc
    } else {
        2.0 * math::atanh(z) - 2.0 * v / (v * v - 1.0)
    }
}

/// Collision time (or an upper bound on it) for colliding initial data.
pub fn collision_time(rs0: &ReducedState, p: &Params) -> Result<CollisionTimeEstimate> {
    let class = classify(rs0, p)?;
    if !class.verdict.is_collision() {
        return Err(Error::RegimeError("initial data does not lead to a collision"));
    }
    let (theta0, w0, h0) = (rs0.theta, rs0.w, class.h0);
    let alpha = p.alpha();
    let a = p.self_coeff();
    let c = p.coupling();
    let h0_zero = is_h0_zero(h0, theta0, p);
    let mut constants = BTreeMap::new();
    constants.insert("h0", h0);

    let estimate = match class.regime {
        Regime::UnitRatio if h0_zero => CollisionTimeEstimate {
            kind: EstimateKind::Exact,
            // W² = W0² - 2αt
            value: w0 * w0 / (2.0 * alpha),
            formula: FormulaTag::Gamma1H0Zero,
            constants,
            uncorrected_value: Some(2.0 * w0 * w0 / alpha),
        },
        Regime::UnitRatio => {
            // (α/H0²) log α - G1(W0) rewritten in x = H0 W0/α.
            let x = h0 * w0 / alpha;
            let value = -alpha / (h0 * h0) * log1p_minus(-x);
            let g1_w0 = alpha / (h0 * h0) * math::ln(alpha - h0 * w0) + w0 / h0;
            constants.insert("g1_w0", g1_w0);
            CollisionTimeEstimate {
                kind: EstimateKind::ImplicitRoot,
                value,
                formula: FormulaTag::Gamma1H0Nonzero,
                constants,
                uncorrected_value: None,
            }
        }
        Regime::Subcritical if h0_zero => {
            let m0 = a * a * a / (c * c) * math::sqrt(c * c / (a * a) - p.offset_coeff());
            constants.insert("m0", m0);
            let e2 = math::exp(2.0 * theta0);
            CollisionTimeEstimate {
                kind: EstimateKind::Exact,
                value: e2 / (2.0 * m0),
                formula: FormulaTag::SubcriticalH0Zero,
                constants,
                uncorrected_value: Some(e2 / (4.0 * m0)),
            }
        }
        Regime::Subcritical if h0 < 0.0 => {
            let m1 = math::sqrt(c * (c - (p.sqrt_gamma() - 1.0) * a)) / (c * c);
            let u0 = a / h0.abs() * math::exp(-theta0);
            // log(u0/(u0-1)) - 1/(u0-1) = ln(1+x) - x with x = 1/(u0-1)
            let t_star = -log1p_minus(1.0 / (u0 - 1.0)) / (m1 * h0 * h0);
            constants.insert("m1", m1);
            constants.insert("u0", u0);
            constants.insert("t_star", t_star);
            CollisionTimeEstimate {
                kind: EstimateKind::UpperBound,
                value: t_star,
                formula: FormulaTag::SubcriticalH0Negative,
                constants,
                uncorrected_value: None,
            }
        }
        Regime::Subcritical => {
            let m2 = math::sqrt(h0) * a * math::sqrt(a) / c;
            constants.insert("m2", m2);
            if let Some(ts) = class.theta_star {
                constants.insert("theta_star", ts);
            }
            CollisionTimeEstimate {
                kind: EstimateKind::UpperBound,
                value: 2.0 * math::exp(1.5 * theta0) / (3.0 * m2),
                formula: FormulaTag::SubcriticalH0Positive,
                constants,
                uncorrected_value: None,
            }
        }
        Regime::Critical => {
            let habs = h0.abs();
            let gamma = p.gamma();
            let root_offset = math::sqrt(p.sqrt_gamma() - 1.0);
            let g34 = math::powf(gamma, 0.75);
            let m3 = root_offset * math::sqrt(habs) / (alpha * math::sqrt(alpha) * g34);
            let m3_uncorrected = root_offset * math::sqrt(habs) / (math::powf(alpha, 1.75) * g34);
            let v0 = math::sqrt(a / habs) * math::exp(-0.5 * theta0);
            let g1 = critical_kernel(v0) / (4.0 * math::sqrt(a) * habs * math::sqrt(habs));
            constants.insert("m3", m3);
            constants.insert("v0", v0);
            constants.insert("g1_v0", g1);
            CollisionTimeEstimate {
                kind: EstimateKind::UpperBound,
                value: -2.0 / m3 * g1,
                formula: FormulaTag::Critical,
                constants,
                uncorrected_value: Some(-2.0 / m3_uncorrected * g1),
            }
        }
        Regime::Supercritical => unreachable!("supercritical data never collides"),
    };
    if !(estimate.value > 0.0 && estimate.value.is_finite()) {
        return Err(Error::DomainError("collision time formula produced a non-positive value"));
    }
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ratio_zero_energy() {
        let p = Params::new(0.5, 1.0).unwrap();
        let est = collision_time(&ReducedState::new(4f64.ln(), 1.0), &p).unwrap();
        assert_eq!(est.kind, EstimateKind::Exact);
        assert_eq!(est.formula, FormulaTag::Gamma1H0Zero);
        assert!((est.value - 1.0).abs() < 1e-15);
        assert_eq!(est.uncorrected_value, Some(4.0));
    }

    #[test]
    fn unit_ratio_nonzero_energy_formula() {
        let p = Params::new(0.5, 1.0).unwrap();
        let est = collision_time(&ReducedState::new(0.0, 0.5), &p).unwrap();
        assert_eq!(est.formula, FormulaTag::Gamma1H0Nonzero);
        assert!((est.constants["h0"] + 1.0).abs() < 1e-15);
        let expected = 0.5 * 0.5f64.ln() + 0.5;
        assert!((est.value - expected).abs() < 1e-14);
        // The direct form agrees when there is no cancellation.
        let direct = 0.5 * 0.5f64.ln() - est.constants["g1_w0"];
        assert!((direct - est.value).abs() < 1e-14);
    }

    #[test]
    fn implicit_form_tends_to_zero_energy_value() {
        // As H0 → 0 the implicit value approaches W0²/(2α).
        let p = Params::new(0.5, 1.0).unwrap();
        let w0 = 1.0;
        for eps in [1e-3, 1e-6, 1e-9] {
            // H0 = -2e^{-θ} + α/W0 = eps
            let theta = (2.0f64 / (0.5 / w0 - eps)).ln();
            let est = collision_time(&ReducedState::new(theta, w0), &p).unwrap();
            assert!((est.value - 1.0).abs() < 2.0 * eps, "{eps}: {}", est.value);
        }
    }

    #[test]
    fn kernels_are_continuous_across_series_switch() {
        for x in [0.99e-4f64, 1.01e-4] {
            let direct = x.ln_1p() - x;
            assert!((log1p_minus(x) - direct).abs() < 1e-15 * x * x + 1e-20);
        }
        for v in [99.9f64, 100.1] {
            let z = 1.0 / v;
            let series = critical_kernel(v);
            let direct = 2.0 * z.atanh() - 2.0 * v / (v * v - 1.0);
            assert!((series - direct).abs() < 1e-9 * direct.abs());
        }
    }

    #[test]
    fn non_colliding_data_is_rejected() {
        let p = Params::new(0.2, 2.0).unwrap();
        assert!(matches!(collision_time(&ReducedState::new(0.0, 1.0), &p), Err(Error::RegimeError(_))));
        let p = Params::new(0.5, 1.0).unwrap();
        assert!(matches!(collision_time(&ReducedState::new(0.0, -1.0), &p), Err(Error::RegimeError(_))));
    }

    #[test]
    fn branch_dispatch() {
        let p = Params::new(0.2, 1.1).unwrap();
        let est = collision_time(&ReducedState::new(0.0, 2.0), &p).unwrap();
        assert_eq!(est.formula, FormulaTag::SubcriticalH0Negative);
        assert_eq!(est.kind, EstimateKind::UpperBound);
        assert!(est.constants["u0"] > 1.0);

        let ts = super::super::threshold::theta_star(&p, 1.0).unwrap();
        let w = crate::dynamics::w_from_theta(ts - 0.5, &p, 1.0).unwrap();
        let est = collision_time(&ReducedState::new(ts - 0.5, w), &p).unwrap();
        assert_eq!(est.formula, FormulaTag::SubcriticalH0Positive);
        assert!((est.constants["theta_star"] - ts).abs() < 1e-9);

        let gs = super::super::threshold::gamma_star(0.2).unwrap();
        let p = Params::new(0.2, gs).unwrap();
        let est = collision_time(&ReducedState::new(0.0, 0.5), &p).unwrap();
        assert_eq!(est.formula, FormulaTag::Critical);
        assert!(est.constants["v0"] > 1.0);
        assert!(est.uncorrected_value.unwrap() < est.value);
    }
}
