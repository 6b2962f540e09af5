//! Bracketed bisection with a short Newton polish.

use crate::error::{Error, Result};

/// Bisection until the bracket is narrower than `width`, then `polish_steps`
/// Newton steps that are kept only while they stay inside the final bracket
/// and do not increase `|f|`.
pub fn bisect_newton<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, width: f64, polish_steps: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::RootNotFound("empty bracket"));
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootNotFound("no sign change on bracket"));
    }
    for _ in 0..2000 {
        if hi - lo <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    let mut fx = f(x);
    for _ in 0..polish_steps {
        let slope = df(x);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = x - fx / slope;
        if !(next >= lo && next <= hi) {
            break;
        }
        let f_next = f(next);
        if f_next.abs() > fx.abs() {
            break;
        }
        x = next;
        fx = f_next;
    }
    Ok(x)
}

/// Expands `hi` by doubling until `f(hi)` differs in sign from `f(lo)`.
pub fn expand_upper<F: Fn(f64) -> f64>(f: &F, lo: f64, mut hi: f64, max_doublings: usize) -> Result<f64> {
    let s_lo = f(lo).signum();
    for _ in 0..max_doublings {
        if f(hi).signum() != s_lo {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::RootNotFound("bracket expansion did not find a sign change"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect_newton(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0, 1e-13, 3).unwrap();
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(bisect_newton(|x| x * x + 1.0, |x| 2.0 * x, -1.0, 1.0, 1e-13, 3).is_err());
    }

    #[test]
    fn expansion() {
        let f = |x: f64| 10.0 - x;
        let hi = expand_upper(&f, 0.0, 1.0, 10).unwrap();
        assert_eq!(hi, 16.0);
        assert!(expand_upper(&f, 0.0, 1.0, 2).is_err());
    }
}
