//! Modified Bessel function of the first kind, real order ν >= -1/2.

use super::gamma::ln_gamma_signed;
use super::{LN_MAX, MAX_TERMS, TAIL_TOL};
use crate::error::{domain, Error, Result};

/// Below this argument the asymptotic expansion is not attempted.
const ASYMPTOTIC_MIN_X: f64 = 50.0;
const RESCALE: f64 = 1e250;

/// I_ν(x) for ν >= -1/2 and x >= 0.
///
/// Returns [`Error::Overflow`] carrying ln I_ν(x) when the value exceeds the
/// `f64` range; use [`ln_bessel_i`] directly in that regime.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    let ln_value = ln_bessel_i(nu, x)?;
    if ln_value > LN_MAX {
        return Err(Error::Overflow { func: "bessel_i", ln_value });
    }
    Ok(ln_value.exp())
}

/// ln I_ν(x), assembled in log space so that large arguments never overflow.
///
/// The ascending series Σ (x/2)^(ν+2k) / (k! Γ(ν+k+1)) is summed with
/// running rescaling; for x >= 50 the Hankel expansion is tried first and
/// used whenever it reaches full double precision.
pub fn ln_bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= -0.5) || !nu.is_finite() {
        return Err(domain("bessel_i", format!("order {nu} must be >= -0.5")));
    }
    if !(x >= 0.0) {
        return Err(domain("bessel_i", format!("x = {x} must be non-negative")));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 {
            0.0
        } else if nu > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
    }
    if x >= ASYMPTOTIC_MIN_X {
        if let Some(v) = ln_hankel(nu, x) {
            return Ok(v);
        }
    }
    ln_series(nu, x)
}

fn ln_series(nu: f64, x: f64) -> Result<f64> {
    let half = 0.5 * x;
    let quarter_sq = half * half;
    let ln_first = nu * half.ln() - ln_gamma_signed(nu + 1.0).0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut ln_scale = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = quarter_sq / ((kf + 1.0) * (kf + 1.0 + nu));
        term *= ratio;
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        if ratio < 1.0 && term <= sum * TAIL_TOL {
            return Ok(ln_first + ln_scale + sum.ln());
        }
    }
    Err(Error::Convergence { func: "bessel_i", iterations: MAX_TERMS })
}

/// Large-argument expansion
/// I_ν(x) ~ e^x / √(2πx) Σ_k (-1)^k a_k(ν) / x^k,
/// a_k = Π_{j=1..k} (4ν² - (2j-1)²) / (k! 8^k).
/// Returns `None` when the terms stop shrinking before reaching precision.
fn ln_hankel(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..=200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
        let size = term.abs();
        if size > prev {
            return None;
        }
        sum += term;
        prev = size;
        if size <= sum.abs() * TAIL_TOL {
            converged = true;
            break;
        }
    }
    if !converged || !(sum > 0.0) {
        return None;
    }
    Some(x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_integer_closed_forms() {
        // I_{1/2}(x) = √(2/(πx)) sinh x
        let v = bessel_i(0.5, 1.0).unwrap();
        assert!(rel(v, (2.0 / PI).sqrt() * 1f64.sinh()) < 1e-14);
        // I_{-1/2}(x) = √(2/(πx)) cosh x
        let v = bessel_i(-0.5, 3.0).unwrap();
        assert!(rel(v, (2.0 / (3.0 * PI)).sqrt() * 3f64.cosh()) < 1e-14);
    }

    #[test]
    fn origin_limits() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(2.5, 0.0).unwrap(), 0.0);
        assert!(matches!(bessel_i(-0.25, 0.0), Err(Error::Overflow { .. })));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_i(1.0, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_i(-0.75, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn overflow_reports_log_value() {
        match bessel_i(0.5, 4000.0) {
            Err(Error::Overflow { ln_value, .. }) => assert!(rel(ln_value, 3994.9340366467443) < 1e-14),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn series_and_hankel_agree_at_switch() {
        for &nu in &[0.0, 0.5, 3.5, 7.25] {
            let s = ln_series(nu, 60.0).unwrap();
            let h = ln_hankel(nu, 60.0).unwrap();
            assert!(rel(s, h) < 1e-14, "nu={nu}: {s} vs {h}");
        }
    }
}
