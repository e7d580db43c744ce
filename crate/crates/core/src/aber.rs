//! Closed-form average error rates and SNR sweeps.
//!
//! With W(x) = Σ pᵢ e^(−qᵢx) standing in for Q_a(√x), every fading density
//! in [`crate::fading`] averages to a finite sum of Laplace transforms:
//!
//! * η–μ: Σ Ψᵢ ₂F₁((m+ν)/2, (m+ν+1)/2; 1+ν; ξ²/β̃ᵢ²), β̃ᵢ = β + qᵢℬ,
//!   Ψᵢ = 𝒜ψpᵢξ^ν Γ(m+ν) / (2^ν β̃ᵢ^(m+ν) Γ(ν+1)).
//! * κ–μ shadowed: Σ 𝒜ψpᵢ Γ(μ̃) sᵢ^(−μ̃) ₂F₁(m̃, μ̃; μ̃; ζ/sᵢ), sᵢ = β + qᵢℬ.
//!
//! In both the second upper parameter equals the lower one, so each ₂F₁ is
//! (1 − z)^(−a). The `_reduced` functions use that form; the `_closed`
//! functions evaluate the hypergeometric function itself.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{
    compact_kms, eta_mu_kernel, CompactEtaMu, CompactKms, EtaMuKernel, FadingSpec, GammaKernel, MimoConfig,
};
use crate::modulation::{ErrorConstants, Modulation};
use crate::noise::{NoiseModel, QApprox};
use crate::quadrature::aber_oracle;
use crate::specfun::{gauss_2f1, ln_gamma};

/// Relative tolerance the sweep uses for the quadrature oracles.
pub const ORACLE_REL_TOL: f64 = 1e-11;

/// Sums sign(pᵢ)·exp(ln|termᵢ|) for terms whose magnitude is kept in logs.
fn signed_sum(fit: &QApprox, consts: ErrorConstants, mut ln_term: impl FnMut(usize) -> Result<f64>) -> Result<f64> {
    if consts.coefficient == 0.0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for i in 0..4 {
        let p = fit.p[i];
        if p == 0.0 {
            continue;
        }
        let ln_mag = ln_term(i)? + p.abs().ln() + consts.coefficient.ln();
        total += p.signum() * ln_mag.exp();
    }
    Ok(total)
}

fn eta_mu_terms(
    compact: &CompactEtaMu,
    fit: &QApprox,
    consts: ErrorConstants,
    hyper: impl Fn(f64, f64) -> Result<f64>,
) -> Result<f64> {
    let CompactEtaMu { ln_psi, m, beta, xi, nu } = *compact;
    let order = m + nu;
    let ln_const = ln_psi + nu * xi.ln() + ln_gamma(order)? - nu * 2f64.ln() - ln_gamma(nu + 1.0)?;
    signed_sum(fit, consts, |i| {
        let bt = beta + fit.q[i] * consts.snr_scale;
        if !(bt > xi) {
            return Err(Error::Precondition { detail: format!("beta~ = {bt} must exceed xi = {xi}") });
        }
        Ok(ln_const - order * bt.ln() + hyper(bt, xi)?)
    })
}

/// η–μ error rate via the Gauss hypergeometric function.
pub fn aber_eta_mu_closed(compact: &CompactEtaMu, fit: &QApprox, consts: ErrorConstants) -> Result<f64> {
    let order = compact.m + compact.nu;
    eta_mu_terms(compact, fit, consts, |bt, xi| {
        let z = (xi / bt) * (xi / bt);
        let f = gauss_2f1(0.5 * order, 0.5 * (order + 1.0), 1.0 + compact.nu, z)?;
        Ok(f.ln())
    })
}

/// η–μ error rate with each ₂F₁ replaced by (1 − ξ²/β̃²)^(−μN_tN_r).
pub fn aber_eta_mu_reduced(compact: &CompactEtaMu, fit: &QApprox, consts: ErrorConstants) -> Result<f64> {
    let order = compact.m + compact.nu;
    eta_mu_terms(compact, fit, consts, |bt, xi| {
        // 1 − ξ²/β̃² = (β̃ − ξ)(β̃ + ξ)/β̃², exact for ξ close to β̃
        let ln_one_minus_z = (bt - xi).ln() + (bt + xi).ln() - 2.0 * bt.ln();
        Ok(-0.5 * order * ln_one_minus_z)
    })
}

/// Error rate for a Gamma-shaped density C γ^(k−1) e^(−rγ): Σ 𝒜pᵢ C Γ(k) / (r + qᵢℬ)^k.
pub fn aber_gamma_closed(kernel: &GammaKernel, fit: &QApprox, consts: ErrorConstants) -> Result<f64> {
    let ln_const = kernel.ln_coef + ln_gamma(kernel.shape)?;
    signed_sum(fit, consts, |i| Ok(ln_const - kernel.shape * (kernel.rate + fit.q[i] * consts.snr_scale).ln()))
}

fn kms_terms(
    compact: &CompactKms,
    fit: &QApprox,
    consts: ErrorConstants,
    hyper: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let ln_const = compact.ln_psi + ln_gamma(compact.mu_tilde)?;
    signed_sum(fit, consts, |i| {
        let s = compact.beta + fit.q[i] * consts.snr_scale;
        if !(s > compact.zeta) {
            return Err(Error::Precondition { detail: format!("s = {s} must exceed zeta = {}", compact.zeta) });
        }
        let tail = if compact.zeta == 0.0 { 0.0 } else { hyper(s)? };
        Ok(ln_const - compact.mu_tilde * s.ln() + tail)
    })
}

/// κ–μ shadowed error rate via ₂F₁(m̃, μ̃; μ̃; ζ/s). κ = 0 skips the ₂F₁.
pub fn aber_kms_closed(compact: &CompactKms, fit: &QApprox, consts: ErrorConstants) -> Result<f64> {
    kms_terms(compact, fit, consts, |s| {
        Ok(gauss_2f1(compact.m_tilde, compact.mu_tilde, compact.mu_tilde, compact.zeta / s)?.ln())
    })
}

/// κ–μ shadowed error rate with each ₂F₁ replaced by (1 − ζ/s)^(−m̃).
pub fn aber_kms_reduced(compact: &CompactKms, fit: &QApprox, consts: ErrorConstants) -> Result<f64> {
    kms_terms(compact, fit, consts, |s| Ok(-compact.m_tilde * (-compact.zeta / s).ln_1p()))
}

/// Closed-form error rate for either fading family.
pub fn closed_form(fading: &FadingSpec, mimo: &MimoConfig, fit: &QApprox, consts: ErrorConstants) -> Result<f64> {
    match fading {
        FadingSpec::EtaMu(p) => match eta_mu_kernel(p, mimo)? {
            EtaMuKernel::Bessel(c) => aber_eta_mu_closed(&c, fit, consts),
            EtaMuKernel::Nakagami(k) => aber_gamma_closed(&k, fit, consts),
        },
        FadingSpec::KappaMuShadowed(p) => aber_kms_closed(&compact_kms(p, mimo), fit, consts),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    /// Quadrature against the literal generalized Q-function.
    OracleExact,
    /// Quadrature against the same four-exponential weight as the closed form.
    OracleApprox,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::OracleExact => "oracle-exact",
            Method::OracleApprox => "oracle-approx",
        })
    }
}

/// Error rate at one mean SNR (linear, per branch) with the given method.
pub fn evaluate(
    fading: &FadingSpec,
    mimo: &MimoConfig,
    fit: &QApprox,
    consts: ErrorConstants,
    method: Method,
) -> Result<f64> {
    let pdf = |g: f64| fading.pdf(mimo, g);
    match method {
        Method::ClosedForm => closed_form(fading, mimo, fit, consts),
        Method::OracleApprox => Ok(aber_oracle(pdf, fit, consts, ORACLE_REL_TOL)?.value),
        Method::OracleExact => {
            let noise = NoiseModel::new(fit.a)?;
            Ok(aber_oracle(pdf, &noise, consts, ORACLE_REL_TOL)?.value)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AberScenario {
    pub fading: FadingSpec,
    pub mimo: MimoConfig,
    pub fit: QApprox,
    pub modulation: Modulation,
    snr_db: Vec<f64>,
}

impl AberScenario {
    /// The fading mean power is overwritten by each grid point.
    pub fn new(
        fading: FadingSpec,
        mimo: MimoConfig,
        fit: QApprox,
        modulation: Modulation,
        snr_db: Vec<f64>,
    ) -> Result<Self> {
        if snr_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition { detail: "SNR grid values must be finite".into() });
        }
        if snr_db.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Precondition { detail: "SNR grid must be strictly increasing".into() });
        }
        modulation.validate()?;
        Ok(Self { fading, mimo, fit, modulation, snr_db })
    }

    pub fn snr_db(&self) -> &[f64] {
        &self.snr_db
    }

    /// Error rate at a single grid value in dB.
    pub fn evaluate_at(&self, snr_db: f64, method: Method) -> Result<f64> {
        let fading = self.fading.with_mean_power(crate::db_to_linear(snr_db))?;
        evaluate(&fading, &self.mimo, &self.fit, self.modulation.constants(), method)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AberPoint {
    pub snr_db: f64,
    /// `None` marks a gap; see `error`.
    pub aber: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AberCurve {
    pub method: Method,
    pub points: Vec<AberPoint>,
    /// Gaps and monotonicity violations, one line each.
    pub diagnostics: Vec<String>,
}

impl AberCurve {
    pub fn values(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.aber).collect()
    }

    /// True when the available values never increase with SNR.
    pub fn is_non_increasing(&self) -> bool {
        let v: Vec<f64> = self.points.iter().filter_map(|p| p.aber).collect();
        v.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Evaluates `method` over the scenario grid. Points run in parallel; the
/// curve keeps grid order.
pub fn sweep(scenario: &AberScenario, method: Method) -> AberCurve {
    let points: Vec<AberPoint> = scenario
        .snr_db
        .par_iter()
        .map(|&snr_db| match scenario.evaluate_at(snr_db, method) {
            Ok(v) => AberPoint { snr_db, aber: Some(v), error: None },
            Err(e) => AberPoint { snr_db, aber: None, error: Some(e.to_string()) },
        })
        .collect();
    let mut diagnostics: Vec<String> = points
        .iter()
        .filter_map(|p| p.error.as_ref().map(|e| format!("gap at {} dB: {e}", p.snr_db)))
        .collect();
    let mut last: Option<(f64, f64)> = None;
    for p in &points {
        if let Some(v) = p.aber {
            if v < 0.0 {
                diagnostics.push(format!("negative value {v:e} at {} dB", p.snr_db));
            }
            if let Some((db, prev)) = last {
                if v > prev {
                    diagnostics.push(format!("increase from {prev:e} at {db} dB to {v:e} at {} dB", p.snr_db));
                }
            }
            last = Some((p.snr_db, v));
        }
    }
    AberCurve { method, points, diagnostics }
}
