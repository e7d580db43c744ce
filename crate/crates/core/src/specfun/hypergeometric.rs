//! Confluent (₁F₁) and Gauss (₂F₁) hypergeometric functions on the real
//! arguments this crate needs.

use super::gamma::{digamma, ln_gamma_signed, recip_gamma};
use super::{LN_MAX, MAX_TERMS, TAIL_TOL};
use crate::error::{domain, Error, Result};

const RESCALE: f64 = 1e250;
/// Arguments above this try the large-z expansion of ₁F₁ first.
const KUMMER_ASYMPTOTIC_MIN_Z: f64 = 600.0;
/// Kummer's transformation is only considered above this argument.
const KUMMER_TRANSFORM_MIN_Z: f64 = 30.0;
/// c - a - b closer than this to an integer is treated as exactly integral.
const INTEGER_SNAP: f64 = 1e-12;
/// c - a - b closer than this to an integer prefers the direct series.
const NEAR_INTEGER: f64 = 1e-5;

/// Neumaier-compensated accumulator that also tracks Σ|term| as a
/// conditioning measure.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
    abs_sum: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }

    /// Σ|t| / |Σt|; 1 for same-sign series.
    fn condition(&self) -> f64 {
        let v = self.value().abs();
        if v == 0.0 {
            f64::INFINITY
        } else {
            self.abs_sum / v
        }
    }
}

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z) for b > 0, z >= 0.
///
/// For a > 0 the all-positive series is summed in log space (see
/// [`ln_kummer_1f1`]). For a <= 0 the series is summed with compensation;
/// above z = 30 Kummer's transformation e^z ₁F₁(b-a; b; -z) is used when it
/// is better conditioned.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    check_kummer_args(a, b, z)?;
    if z == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    if a > 0.0 {
        let ln_value = ln_kummer_1f1(a, b, z)?;
        if ln_value > LN_MAX {
            return Err(Error::Overflow { func: "kummer_1f1", ln_value });
        }
        return Ok(ln_value.exp());
    }
    let direct = series_1f1(a, b, z);
    if z > KUMMER_TRANSFORM_MIN_Z && !is_non_positive_integer(a) {
        let direct_cond = direct.as_ref().map(|c| c.condition()).unwrap_or(f64::INFINITY);
        if direct_cond > 1e3 {
            if let Ok(t) = series_1f1(b - a, b, -z) {
                if t.condition() < direct_cond {
                    let ln_value = z + t.value().abs().ln();
                    if ln_value > LN_MAX {
                        return Err(Error::Overflow { func: "kummer_1f1", ln_value });
                    }
                    return Ok(t.value() * z.exp());
                }
            }
        }
    }
    direct.map(|c| c.value())
}

fn check_kummer_args(a: f64, b: f64, z: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(domain("kummer_1f1", format!("a = {a} must be finite")));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain("kummer_1f1", format!("b = {b} must be positive")));
    }
    if !(z >= 0.0) {
        return Err(domain("kummer_1f1", format!("z = {z} must be non-negative")));
    }
    Ok(())
}

fn series_1f1(a: f64, b: f64, z: f64) -> Result<Compensated> {
    let mut acc = Compensated::default();
    let mut term = 1.0;
    acc.add(term);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        acc.add(term);
        if term == 0.0 {
            return Ok(acc);
        }
        // Terms only shrink for good once k exceeds |z|.
        if kf > z.abs() && term.abs() <= acc.value().abs() * TAIL_TOL {
            return Ok(acc);
        }
    }
    Err(Error::Convergence { func: "kummer_1f1", iterations: MAX_TERMS })
}

/// ln ₁F₁(a; b; z) for a > 0, b > 0, z >= 0 (all terms positive).
pub fn ln_kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    check_kummer_args(a, b, z)?;
    if !(a > 0.0) {
        return Err(domain("ln_kummer_1f1", format!("a = {a} must be positive")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if z >= KUMMER_ASYMPTOTIC_MIN_Z {
        if let Some(v) = ln_kummer_asymptotic(a, b, z) {
            return Ok(v);
        }
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut ln_scale = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * z / ((b + kf) * (kf + 1.0));
        term *= ratio;
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        if ratio < 1.0 && term <= sum * TAIL_TOL {
            return Ok(ln_scale + sum.ln());
        }
    }
    Err(Error::Convergence { func: "kummer_1f1", iterations: MAX_TERMS })
}

/// ₁F₁(a;b;z) ~ Γ(b)/Γ(a) e^z z^(a-b) Σ_k (b-a)_k (1-a)_k / (k! z^k)
fn ln_kummer_asymptotic(a: f64, b: f64, z: f64) -> Option<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 0..200 {
        let kf = k as f64;
        term *= (b - a + kf) * (1.0 - a + kf) / ((kf + 1.0) * z);
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
    let (ln_gb, _) = ln_gamma_signed(b);
    let (ln_ga, _) = ln_gamma_signed(a);
    Some(ln_gb - ln_ga + z + (a - b) * z.ln() + sum.ln())
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for c > 0 and 0 <= z < 1.
///
/// Direct series for z <= 1/2. Above that the linear transformation to
/// 1 - z is applied; when c - a - b is an integer the logarithmic
/// (degenerate) form of the transformation is used, and when it is merely
/// close to one the compensated direct series is preferred.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("gauss_2f1", "a and b must be finite"));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(domain("gauss_2f1", format!("c = {c} must be positive")));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(domain("gauss_2f1", format!("z = {z} must lie in [0, 1)")));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    // Terminating series: exact polynomial at any z.
    if is_non_positive_integer(a) || is_non_positive_integer(b) || z <= 0.5 {
        return series_2f1(a, b, c, z).map(|s| s.value());
    }

    let d = c - a - b;
    let nearest = d.round();
    let gap = (d - nearest).abs();
    if gap <= INTEGER_SNAP * d.abs().max(1.0) {
        return transform_integer(a, b, c, z, nearest as i64);
    }
    if gap < NEAR_INTEGER {
        if let Ok(s) = series_2f1(a, b, c, z) {
            return Ok(s.value());
        }
    }
    transform_generic(a, b, c, z)
}

fn series_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<Compensated> {
    let mut acc = Compensated::default();
    let mut term = 1.0;
    acc.add(term);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        acc.add(term);
        if term == 0.0 {
            return Ok(acc);
        }
        let ratio = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * z).abs();
        if ratio < 1.0 && term.abs() <= acc.value().abs() * TAIL_TOL {
            return Ok(acc);
        }
    }
    Err(Error::Convergence { func: "gauss_2f1", iterations: MAX_TERMS })
}

/// Signed product of gamma functions Π Γ(num) / Π Γ(den), assembled in logs.
/// Any pole in the denominator makes the product exactly zero.
fn gamma_ratio(num: &[f64], den: &[f64]) -> f64 {
    let mut ln_abs = 0.0;
    let mut sign = 1.0;
    for &x in den {
        if recip_gamma(x) == 0.0 {
            return 0.0;
        }
        let (l, s) = ln_gamma_signed(x);
        ln_abs -= l;
        sign *= s;
    }
    for &x in num {
        let (l, s) = ln_gamma_signed(x);
        ln_abs += l;
        sign *= s;
    }
    sign * ln_abs.exp()
}

/// F = G1 F(a,b; a+b-c+1; w) + w^(c-a-b) G2 F(c-a, c-b; c-a-b+1; w), w = 1 - z
fn transform_generic(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let w = 1.0 - z;
    let d = c - a - b;
    let g1 = gamma_ratio(&[c, d], &[c - a, c - b]);
    let g2 = gamma_ratio(&[c, -d], &[a, b]);
    let mut total = 0.0;
    if g1 != 0.0 {
        total += g1 * series_2f1(a, b, 1.0 - d, w)?.value();
    }
    if g2 != 0.0 {
        total += g2 * w.powf(d) * series_2f1(c - a, c - b, d + 1.0, w)?.value();
    }
    Ok(total)
}

/// Logarithmic transformation for integral n = c - a - b.
fn transform_integer(a: f64, b: f64, c: f64, z: f64, n: i64) -> Result<f64> {
    let w = 1.0 - z;
    let ln_w = w.ln();
    let m = n.unsigned_abs() as usize;
    let mf = m as f64;

    if n >= 0 {
        // c = a + b + m
        let mut finite = 0.0;
        if m > 0 {
            let coef = gamma_ratio(&[mf, c], &[a + mf, b + mf]);
            if coef != 0.0 {
                finite = coef * finite_sum(a, b, m, w);
            }
        }
        let coef = gamma_ratio(&[c], &[a, b]);
        let mut log_part = 0.0;
        if coef != 0.0 {
            // -(z-1)^m = -(-w)^m
            let sign = if m.is_multiple_of(2) { -1.0 } else { 1.0 };
            let series = log_series(a + mf, b + mf, m, w, ln_w, a + mf, b + mf)?;
            log_part = sign * coef * w.powi(m as i32) * series;
        }
        Ok(finite + log_part)
    } else {
        // c = a + b - m
        let coef = gamma_ratio(&[mf, c], &[a, b]);
        let mut finite = 0.0;
        if coef != 0.0 {
            finite = coef * w.powi(-(m as i32)) * finite_sum(a - mf, b - mf, m, w);
        }
        let coef = gamma_ratio(&[c], &[a - mf, b - mf]);
        let mut log_part = 0.0;
        if coef != 0.0 {
            let sign = if m.is_multiple_of(2) { -1.0 } else { 1.0 };
            let series = log_series(a, b, m, w, ln_w, a, b)?;
            log_part = sign * coef * series;
        }
        Ok(finite + log_part)
    }
}

/// Σ_{k<m} (p)_k (q)_k / (k! (1-m)_k) w^k
fn finite_sum(p: f64, q: f64, m: usize, w: f64) -> f64 {
    let mut acc = Compensated::default();
    let mut term = 1.0;
    acc.add(term);
    for k in 0..m.saturating_sub(1) {
        let kf = k as f64;
        term *= (p + kf) * (q + kf) / ((kf + 1.0) * (1.0 - m as f64 + kf)) * w;
        acc.add(term);
    }
    acc.value()
}

/// Σ_k (p)_k (q)_k / (k! (k+m)!) w^k [ln w - ψ(k+1) - ψ(k+m+1) + ψ(r+k) + ψ(s+k)]
fn log_series(p: f64, q: f64, m: usize, w: f64, ln_w: f64, r: f64, s: f64) -> Result<f64> {
    let mf = m as f64;
    let mut acc = Compensated::default();
    // 1 / m!
    let mut coef = (-ln_gamma_signed(mf + 1.0).0).exp();
    let mut psi_k1 = digamma(1.0)?;
    let mut psi_km1 = digamma(mf + 1.0)?;
    let mut psi_r = digamma(r)?;
    let mut psi_s = digamma(s)?;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let term = coef * (ln_w - psi_k1 - psi_km1 + psi_r + psi_s);
        acc.add(term);
        if coef == 0.0 || (kf > 1.0 && term.abs() <= acc.value().abs() * TAIL_TOL && coef.abs() <= acc.value().abs() * TAIL_TOL) {
            return Ok(acc.value());
        }
        coef *= (p + kf) * (q + kf) / ((kf + 1.0) * (kf + mf + 1.0)) * w;
        psi_k1 += 1.0 / (kf + 1.0);
        psi_km1 += 1.0 / (kf + mf + 1.0);
        psi_r += 1.0 / (r + kf);
        psi_s += 1.0 / (s + kf);
    }
    Err(Error::Convergence { func: "gauss_2f1", iterations: MAX_TERMS })
}
