//! Adaptive Gauss–Kronrod (7/15) quadrature on [0, ∞), used as an oracle for
//! the closed-form error rates.
//!
//! The half line is mapped onto [0, 1) by γ = t/(1 − t) and split at
//! γ = 10^k, k = −10..=10, before adaptive bisection starts. Intervals are
//! refined in order of decreasing error estimate until the summed estimate
//! meets the relative tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::modulation::ErrorConstants;
use crate::noise::ConditionalError;

/// Hard cap on the number of subintervals.
pub const MAX_INTERVALS: usize = 10_000;
/// Tightest relative tolerance accepted; GK15 round-off sits near 50 ε.
pub const MIN_REL_TOL: f64 = 1e-12;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One GK15 panel on [lo, hi] with the QUADPACK error heuristic.
fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { lo, hi, value: res_k * half, error: err })
}

/// ∫₀^∞ f(γ) dγ to relative tolerance `rel_tol` (at least [`MIN_REL_TOL`]).
///
/// Any error returned by `f` aborts the integration. Exceeding
/// [`MAX_INTERVALS`] yields [`Error::Integration`] with the partial result.
pub fn integrate_semi_infinite<F: FnMut(f64) -> Result<f64>>(mut f: F, rel_tol: f64) -> Result<Estimate> {
    if !(rel_tol >= MIN_REL_TOL) {
        return Err(Error::Precondition { detail: format!("rel_tol = {rel_tol} is below {MIN_REL_TOL}") });
    }
    let mut evaluations = 0usize;
    let mut g = |t: f64| -> Result<f64> {
        evaluations += 1;
        let one_minus = 1.0 - t;
        let gamma = t / one_minus;
        let v = f(gamma)? / (one_minus * one_minus);
        if !v.is_finite() {
            return Err(crate::error::domain("integrate_semi_infinite", format!("integrand is {v} at {gamma}")));
        }
        Ok(v)
    };

    let mut cuts = vec![0.0];
    for k in -10..=10 {
        let x = 10f64.powi(k);
        cuts.push(x / (1.0 + x));
    }
    cuts.push(1.0);

    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let s = gk15(&mut g, w[0], w[1])?;
        value += s.value;
        error += s.error;
        heap.push(s);
    }

    while error > rel_tol * value.abs() {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Integration { partial: value, abs_error: error, intervals: heap.len() });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // interval can no longer be split in floating point
            return Err(Error::Integration { partial: value, abs_error: error, intervals: heap.len() + 1 });
        }
        let left = gk15(&mut g, worst.lo, mid)?;
        let right = gk15(&mut g, mid, worst.hi)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Recompute the running sums now and then to shed accumulated round-off.
        if heap.len() % 256 == 0 {
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
    let intervals = heap.len();
    let value_sum: f64 = heap.iter().map(|s| s.value).sum();
    let error_sum: f64 = heap.iter().map(|s| s.error).sum();
    Ok(Estimate { value: value_sum, abs_error: error_sum, intervals, evaluations })
}

/// 𝒜 ∫₀^∞ W(ℬγ) f(γ) dγ: the average error rate by direct integration of the
/// fading density against the conditional error weight W(x) ≈ Q_a(√x).
pub fn aber_oracle<P, W>(pdf: P, weight: &W, consts: ErrorConstants, rel_tol: f64) -> Result<Estimate>
where
    P: Fn(f64) -> Result<f64>,
    W: ConditionalError + ?Sized,
{
    let b = consts.snr_scale;
    let est = integrate_semi_infinite(
        |gamma| {
            let w = weight.q_sqrt(b * gamma)?;
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * pdf(gamma)?)
        },
        rel_tol,
    )?;
    let a = consts.coefficient;
    Ok(Estimate { value: a * est.value, abs_error: a.abs() * est.abs_error, ..est })
}
