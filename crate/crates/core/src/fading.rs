//! Fading power distributions after orthogonal STBC combining over
//! `N_t × N_r` uncorrelated branches.
//!
//! * η–μ (format 1, parameter η) and λ–μ (format 2, parameter λ):
//!   f(γ) = ψ γ^(m−1) e^(−βγ) I_ν(ξγ) with m = μN_tN_r + ½, ν = m − 1,
//!   β = 2μh/γ̄ and ξ = 2μ|H|/γ̄.
//! * κ–μ shadowed: f(γ) = ψ γ^(μ̃−1) e^(−βγ) ₁F₁(m̃; μ̃; ζγ) with
//!   μ̃ = N_tN_rμ, m̃ = N_tN_rm and aggregated mean power N_tN_rγ̄.
//!
//! Every density is assembled in log space. The mean of the combined SNR is
//! N_tN_r γ̄ in both families; no per-antenna power split or code-rate factor
//! is applied.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{ln_bessel_i, ln_gamma, ln_kummer_1f1};

/// Finite stand-in for the m → ∞ entries of the special-case table.
pub const M_LARGE: f64 = 5e4;

const LN_MAX: f64 = 709.782712893384;

fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter { name, value, reason }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMuFormat {
    /// Format 1: unequal in-phase/quadrature powers, shape η > 0.
    Eta,
    /// Format 2: correlated in-phase/quadrature components, shape λ ∈ (−1, 1).
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaMuParams {
    format: EtaMuFormat,
    shape: f64,
    mu: f64,
    mean_power: f64,
}

impl EtaMuParams {
    pub fn new(format: EtaMuFormat, shape: f64, mu: f64, mean_power: f64) -> Result<Self> {
        match format {
            EtaMuFormat::Eta if !(shape > 0.0) || !shape.is_finite() => {
                return Err(invalid("eta", shape, "must be positive"))
            }
            EtaMuFormat::Lambda if !(shape.abs() < 1.0) => {
                return Err(invalid("lambda", shape, "must lie in (-1, 1)"))
            }
            _ => {}
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(invalid("mu", mu, "must be positive"));
        }
        if !(mean_power > 0.0) || !mean_power.is_finite() {
            return Err(invalid("mean_power", mean_power, "must be positive"));
        }
        Ok(Self { format, shape, mu, mean_power })
    }

    /// Format-1 shorthand.
    pub fn eta(eta: f64, mu: f64, mean_power: f64) -> Result<Self> {
        Self::new(EtaMuFormat::Eta, eta, mu, mean_power)
    }

    /// Format-2 shorthand.
    pub fn lambda(lambda: f64, mu: f64, mean_power: f64) -> Result<Self> {
        Self::new(EtaMuFormat::Lambda, lambda, mu, mean_power)
    }

    pub fn format(&self) -> EtaMuFormat {
        self.format
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn mean_power(&self) -> f64 {
        self.mean_power
    }

    pub fn with_mean_power(&self, mean_power: f64) -> Result<Self> {
        Self::new(self.format, self.shape, self.mu, mean_power)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaMuShadowedParams {
    kappa: f64,
    mu: f64,
    m: f64,
    mean_power: f64,
}

impl KappaMuShadowedParams {
    pub fn new(kappa: f64, mu: f64, m: f64, mean_power: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(invalid("kappa", kappa, "must be non-negative"));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(invalid("mu", mu, "must be positive"));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(invalid("m", m, "must be positive"));
        }
        if !(mean_power > 0.0) || !mean_power.is_finite() {
            return Err(invalid("mean_power", mean_power, "must be positive"));
        }
        Ok(Self { kappa, mu, m, mean_power })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn mean_power(&self) -> f64 {
        self.mean_power
    }

    pub fn with_mean_power(&self, mean_power: f64) -> Result<Self> {
        Self::new(self.kappa, self.mu, self.m, mean_power)
    }
}

/// Antenna counts of the STBC link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MimoConfig {
    pub nt: u32,
    pub nr: u32,
}

impl MimoConfig {
    pub fn new(nt: u32, nr: u32) -> Result<Self> {
        if nt == 0 {
            return Err(invalid("nt", 0.0, "need at least one transmit antenna"));
        }
        if nr == 0 {
            return Err(invalid("nr", 0.0, "need at least one receive antenna"));
        }
        Ok(Self { nt, nr })
    }

    pub fn siso() -> Self {
        Self { nt: 1, nr: 1 }
    }

    /// N_t · N_r
    pub fn branches(&self) -> f64 {
        (self.nt * self.nr) as f64
    }
}

/// Either supported fading family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingSpec {
    EtaMu(EtaMuParams),
    KappaMuShadowed(KappaMuShadowedParams),
}

impl FadingSpec {
    pub fn mean_power(&self) -> f64 {
        match self {
            FadingSpec::EtaMu(p) => p.mean_power(),
            FadingSpec::KappaMuShadowed(p) => p.mean_power(),
        }
    }

    pub fn with_mean_power(&self, mean_power: f64) -> Result<Self> {
        Ok(match self {
            FadingSpec::EtaMu(p) => FadingSpec::EtaMu(p.with_mean_power(mean_power)?),
            FadingSpec::KappaMuShadowed(p) => FadingSpec::KappaMuShadowed(p.with_mean_power(mean_power)?),
        })
    }

    /// Density of the combined SNR.
    pub fn pdf(&self, mimo: &MimoConfig, gamma: f64) -> Result<f64> {
        match self {
            FadingSpec::EtaMu(p) => pdf_eta_mu(p, mimo, gamma),
            FadingSpec::KappaMuShadowed(p) => pdf_kms(p, mimo, gamma),
        }
    }
}

/// (h, H) of the η–μ / λ–μ formats. H is signed: negative for η > 1 or λ < 0.
#[allow(non_snake_case)]
pub fn eta_mu_hH(params: &EtaMuParams) -> (f64, f64) {
    let s = params.shape;
    match params.format {
        EtaMuFormat::Eta => ((1.0 + s) * (1.0 + s) / (4.0 * s), (1.0 - s * s) / (4.0 * s)),
        EtaMuFormat::Lambda => {
            let d = 1.0 - s * s;
            (1.0 / d, s / d)
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) {
        return Err(crate::error::domain("pdf", format!("gamma = {gamma} must be non-negative")));
    }
    Ok(())
}

fn finish(func: &'static str, ln_value: f64) -> Result<f64> {
    if ln_value > LN_MAX {
        return Err(Error::Overflow { func, ln_value });
    }
    Ok(ln_value.exp())
}

/// Value at γ = 0 of c·γ^(e) behaviour: 0, the constant, or +∞.
fn origin_limit(exponent: f64, ln_coef: f64) -> f64 {
    if exponent > 0.0 {
        0.0
    } else if exponent == 0.0 {
        ln_coef.exp()
    } else {
        f64::INFINITY
    }
}

/// η–μ / λ–μ density of the combined SNR at `gamma`, written out term by term.
pub fn pdf_eta_mu(params: &EtaMuParams, mimo: &MimoConfig, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let (h, big_h) = eta_mu_hH(params);
    let big_h = big_h.abs();
    if big_h == 0.0 {
        return nakagami_limit(params, mimo).pdf(gamma);
    }
    let mu = params.mu;
    let gbar = params.mean_power;
    let order = mu * mimo.branches();
    if gamma == 0.0 {
        // γ^(2μL−1) behaviour near the origin
        let ln_c = (2.0 * PI.sqrt()).ln() + order * h.ln() - ln_gamma(order)?
            + (order + 0.5) * (mu / gbar).ln()
            + (order - 0.5) * (2.0 * mu / gbar).ln()
            - (order - 0.5) * 2f64.ln()
            - ln_gamma(order + 0.5)?;
        return Ok(origin_limit(2.0 * order - 1.0, ln_c));
    }
    let ln_f = (2.0 * PI.sqrt()).ln() + order * h.ln() - ln_gamma(order)?
        + (order + 0.5) * (mu / gbar).ln()
        + (order - 0.5) * (gamma / big_h).ln()
        - 2.0 * mu * h / gbar * gamma
        + ln_bessel_i(order - 0.5, 2.0 * mu * big_h / gbar * gamma)?;
    finish("pdf_eta_mu", ln_f)
}

/// Coefficients of f(γ) = ψ γ^(m−1) e^(−βγ) I_ν(ξγ). ψ is kept as ln ψ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactEtaMu {
    pub ln_psi: f64,
    pub m: f64,
    pub beta: f64,
    pub xi: f64,
    pub nu: f64,
}

impl CompactEtaMu {
    pub fn psi(&self) -> f64 {
        self.ln_psi.exp()
    }

    /// Density rebuilt from the compact coefficients.
    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        if gamma == 0.0 {
            let ln_c = self.ln_psi + self.nu * (0.5 * self.xi).ln() - ln_gamma(self.nu + 1.0)?;
            return Ok(origin_limit(self.m - 1.0 + self.nu, ln_c));
        }
        let ln_f = self.ln_psi + (self.m - 1.0) * gamma.ln() - self.beta * gamma
            + ln_bessel_i(self.nu, self.xi * gamma)?;
        finish("pdf_eta_mu", ln_f)
    }
}

/// Compact η–μ coefficients. H = 0 (η = 1 or λ = 0) makes ψ singular and is
/// reported as [`Error::DegenerateH`]; use [`eta_mu_kernel`] to get the
/// Nakagami limit instead.
pub fn compact_eta_mu(params: &EtaMuParams, mimo: &MimoConfig) -> Result<CompactEtaMu> {
    let (h, big_h) = eta_mu_hH(params);
    let big_h = big_h.abs();
    if big_h == 0.0 {
        return Err(Error::DegenerateH);
    }
    let mu = params.mu;
    let gbar = params.mean_power;
    let order = mu * mimo.branches();
    let m = order + 0.5;
    let ln_psi = (2.0 * PI.sqrt()).ln() + order * h.ln() - ln_gamma(order)? - (m - 1.0) * big_h.ln()
        + m * (mu / gbar).ln();
    Ok(CompactEtaMu { ln_psi, m, beta: 2.0 * mu * h / gbar, xi: 2.0 * mu * big_h / gbar, nu: m - 1.0 })
}

/// f(γ) = C γ^(shape−1) e^(−rate·γ): the H → 0 limit of the η–μ kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaKernel {
    pub ln_coef: f64,
    pub shape: f64,
    pub rate: f64,
}

impl GammaKernel {
    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        if gamma == 0.0 {
            return Ok(origin_limit(self.shape - 1.0, self.ln_coef));
        }
        finish("pdf_gamma", self.ln_coef + (self.shape - 1.0) * gamma.ln() - self.rate * gamma)
    }
}

/// Limit of ψ γ^(m−1) e^(−βγ) I_ν(ξγ) as H → 0, where ξ^ν / H^(m−1) stays
/// finite. With h = 1 this is the Nakagami-(2μN_tN_r) power density.
pub fn nakagami_limit(params: &EtaMuParams, mimo: &MimoConfig) -> GammaKernel {
    let (h, _) = eta_mu_hH(params);
    let mu = params.mu;
    let gbar = params.mean_power;
    let order = mu * mimo.branches();
    let shape = 2.0 * order;
    // 2√π h^(μL) (μ/γ̄)^(2μL) / (Γ(μL) Γ(μL + ½))
    let ln_coef = (2.0 * PI.sqrt()).ln() + order * h.ln() + shape * (mu / gbar).ln()
        - ln_gamma(order).unwrap_or(f64::NAN)
        - ln_gamma(order + 0.5).unwrap_or(f64::NAN);
    GammaKernel { ln_coef, shape, rate: 2.0 * mu * h / gbar }
}

/// The η–μ density in whichever compact form applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaMuKernel {
    Bessel(CompactEtaMu),
    Nakagami(GammaKernel),
}

pub fn eta_mu_kernel(params: &EtaMuParams, mimo: &MimoConfig) -> Result<EtaMuKernel> {
    match compact_eta_mu(params, mimo) {
        Ok(c) => Ok(EtaMuKernel::Bessel(c)),
        Err(Error::DegenerateH) => Ok(EtaMuKernel::Nakagami(nakagami_limit(params, mimo))),
        Err(e) => Err(e),
    }
}

/// (μ̃, m̃, aggregated mean power)
fn kms_aggregate(params: &KappaMuShadowedParams, mimo: &MimoConfig) -> (f64, f64, f64) {
    let l = mimo.branches();
    (l * params.mu, l * params.m, l * params.mean_power)
}

/// κ–μ shadowed density of the combined SNR, written out term by term.
pub fn pdf_kms(params: &KappaMuShadowedParams, mimo: &MimoConfig, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let (mu_t, m_t, gbar_agg) = kms_aggregate(params, mimo);
    let kappa = params.kappa;
    // μ̃^μ̃ m̃^m̃ (1+κ)^μ̃ / (Γ(μ̃) (μ̃κ+m̃)^m̃ γ̄^μ̃), with m̃^m̃/(μ̃κ+m̃)^m̃ via ln1p
    let ln_prefactor = mu_t * mu_t.ln() + mu_t * kappa.ln_1p() - ln_gamma(mu_t)?
        - m_t * (mu_t * kappa / m_t).ln_1p()
        - mu_t * gbar_agg.ln();
    if gamma == 0.0 {
        return Ok(origin_limit(mu_t - 1.0, ln_prefactor));
    }
    let rate = mu_t * (1.0 + kappa) / gbar_agg;
    let arg = mu_t * mu_t * kappa * (1.0 + kappa) / ((mu_t * kappa + m_t) * gbar_agg) * gamma;
    let ln_f = ln_prefactor + (mu_t - 1.0) * gamma.ln() - rate * gamma + ln_kummer_1f1(m_t, mu_t, arg)?;
    finish("pdf_kms", ln_f)
}

/// Coefficients of f(γ) = ψ γ^(μ̃−1) e^(−βγ) ₁F₁(m̃; μ̃; ζγ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactKms {
    pub ln_psi: f64,
    pub mu_tilde: f64,
    pub m_tilde: f64,
    pub beta: f64,
    pub zeta: f64,
}

impl CompactKms {
    pub fn psi(&self) -> f64 {
        self.ln_psi.exp()
    }

    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        if gamma == 0.0 {
            return Ok(origin_limit(self.mu_tilde - 1.0, self.ln_psi));
        }
        let ln_f = self.ln_psi + (self.mu_tilde - 1.0) * gamma.ln() - self.beta * gamma
            + ln_kummer_1f1(self.m_tilde, self.mu_tilde, self.zeta * gamma)?;
        finish("pdf_kms", ln_f)
    }
}

pub fn compact_kms(params: &KappaMuShadowedParams, mimo: &MimoConfig) -> CompactKms {
    let (mu_t, m_t, gbar_agg) = kms_aggregate(params, mimo);
    let kappa = params.kappa;
    let denom = mu_t * kappa + m_t;
    // m̃^m̃ / (μ̃κ + m̃)^m̃ = (1 + μ̃κ/m̃)^(−m̃); the ln1p form survives m̃ ~ 1e5
    let ln_psi = mu_t * mu_t.ln() + mu_t * kappa.ln_1p()
        - ln_gamma(mu_t).unwrap_or(f64::NAN)
        - m_t * (mu_t * kappa / m_t).ln_1p()
        - mu_t * gbar_agg.ln();
    CompactKms {
        ln_psi,
        mu_tilde: mu_t,
        m_tilde: m_t,
        beta: mu_t * (1.0 + kappa) / gbar_agg,
        zeta: mu_t * mu_t * kappa * (1.0 + kappa) / (denom * gbar_agg),
    }
}

/// Named special cases reachable from the κ–μ shadowed model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialCase {
    KappaMu { kappa: f64, mu: f64 },
    /// Format-1 η–μ; η > 1 is folded onto 1/η, which has the same law.
    EtaMu { eta: f64, mu: f64 },
    RicianShadowed { k: f64, m: f64 },
    /// Nakagami-q, q ∈ (0, 1].
    Hoyt { q: f64 },
    Rician { k: f64 },
    NakagamiM { m: f64 },
    Rayleigh,
    OneSidedGaussian,
}

/// κ–μ shadowed parameters for a named special case. m → ∞ entries use
/// [`M_LARGE`]; κ → 0 entries use κ = 0 exactly.
pub fn special_case_params(case: SpecialCase, mean_power: f64) -> Result<KappaMuShadowedParams> {
    let (kappa, mu, m) = match case {
        SpecialCase::KappaMu { kappa, mu } => (kappa, mu, M_LARGE),
        SpecialCase::EtaMu { eta, mu } => {
            if !(eta > 0.0) || !eta.is_finite() {
                return Err(invalid("eta", eta, "must be positive"));
            }
            let eta = if eta > 1.0 { 1.0 / eta } else { eta };
            ((1.0 - eta) / (2.0 * eta), 2.0 * mu, mu)
        }
        SpecialCase::RicianShadowed { k, m } => (k, 1.0, m),
        SpecialCase::Hoyt { q } => {
            if !(q > 0.0 && q <= 1.0) {
                return Err(invalid("q", q, "Hoyt q must lie in (0, 1]"));
            }
            ((1.0 - q * q) / (2.0 * q * q), 1.0, 0.5)
        }
        SpecialCase::Rician { k } => (k, 1.0, M_LARGE),
        SpecialCase::NakagamiM { m } => {
            if !(m >= 0.5) || !m.is_finite() {
                return Err(invalid("m", m, "Nakagami m must be at least 0.5"));
            }
            (0.0, m, M_LARGE)
        }
        SpecialCase::Rayleigh => (0.0, 1.0, M_LARGE),
        SpecialCase::OneSidedGaussian => (0.0, 0.5, M_LARGE),
    };
    KappaMuShadowedParams::new(kappa, mu, m, mean_power)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    #[allow(non_snake_case)]
    fn table_h_values() {
        let (h, H) = eta_mu_hH(&EtaMuParams::eta(1.0, 1.0, 1.0).unwrap());
        assert_eq!((h, H), (1.0, 0.0));
        let (h, H) = eta_mu_hH(&EtaMuParams::eta(0.5, 1.0, 1.0).unwrap());
        assert!((h - 1.125).abs() < 1e-15 && (H - 0.375).abs() < 1e-15);
        let (h, H) = eta_mu_hH(&EtaMuParams::lambda(0.0, 1.0, 1.0).unwrap());
        assert_eq!((h, H), (1.0, 0.0));
        let (h, H) = eta_mu_hH(&EtaMuParams::lambda(0.5, 1.0, 1.0).unwrap());
        assert!(rel(h, 4.0 / 3.0) < 1e-15 && rel(H, 2.0 / 3.0) < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(EtaMuParams::eta(0.0, 1.0, 1.0).is_err());
        assert!(EtaMuParams::lambda(1.0, 1.0, 1.0).is_err());
        assert!(EtaMuParams::eta(0.5, 0.0, 1.0).is_err());
        assert!(EtaMuParams::eta(0.5, 1.0, -1.0).is_err());
        assert!(KappaMuShadowedParams::new(-0.1, 1.0, 1.0, 1.0).is_err());
        assert!(KappaMuShadowedParams::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(MimoConfig::new(0, 2).is_err());
        assert!(MimoConfig::new(2, 0).is_err());
    }

    #[test]
    fn rayleigh_reduction_of_eta_mu() {
        let p = EtaMuParams::eta(1.0, 0.5, 1.0).unwrap();
        let v = pdf_eta_mu(&p, &MimoConfig::siso(), 1.0).unwrap();
        assert!(rel(v, (-1.0f64).exp()) < 1e-13);
    }

    #[test]
    fn rayleigh_reduction_of_kms() {
        let p = KappaMuShadowedParams::new(0.0, 1.0, 3.0, 1.0).unwrap();
        let v = pdf_kms(&p, &MimoConfig::siso(), 2.0).unwrap();
        assert!(rel(v, (-2.0f64).exp()) < 1e-14);
    }

    #[test]
    fn compact_eta_mu_coefficients() {
        let p = EtaMuParams::eta(0.5, 1.0, 1.0).unwrap();
        let c = compact_eta_mu(&p, &MimoConfig::siso()).unwrap();
        assert!((c.beta - 2.25).abs() < 1e-15);
        assert!((c.xi - 0.75).abs() < 1e-15);
        assert_eq!(c.nu, 0.5);
        let c = compact_eta_mu(&p, &MimoConfig::new(2, 2).unwrap()).unwrap();
        assert_eq!((c.m, c.nu), (4.5, 3.5));
        let degenerate = EtaMuParams::eta(1.0, 1.0, 1.0).unwrap();
        assert_eq!(compact_eta_mu(&degenerate, &MimoConfig::siso()), Err(Error::DegenerateH));
    }

    #[test]
    fn compact_kms_coefficients() {
        let p = KappaMuShadowedParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let c = compact_kms(&p, &MimoConfig::siso());
        assert!((c.beta - 2.0).abs() < 1e-15);
        assert!((c.zeta - 1.0).abs() < 1e-15);
        let p = KappaMuShadowedParams::new(0.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(compact_kms(&p, &MimoConfig::siso()).zeta, 0.0);
    }

    #[test]
    fn origin_values() {
        let siso = MimoConfig::siso();
        let p = KappaMuShadowedParams::new(0.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(pdf_kms(&p, &siso, 0.0).unwrap(), 0.0);
        // μ̃ = 1: f(0) = ψ = 1/γ̄ for Rayleigh
        let p = KappaMuShadowedParams::new(0.0, 1.0, 1.0, 2.0).unwrap();
        assert!(rel(pdf_kms(&p, &siso, 0.0).unwrap(), 0.5) < 1e-14);
        // One-sided Gaussian edge μ = 0.5 for η–μ: finite positive
        let p = EtaMuParams::eta(0.5, 0.5, 1.0).unwrap();
        let f0 = pdf_eta_mu(&p, &siso, 0.0).unwrap();
        let f_small = pdf_eta_mu(&p, &siso, 1e-12).unwrap();
        assert!(f0 > 0.0 && f0.is_finite());
        assert!(rel(f_small, f0) < 1e-9);
        let p = EtaMuParams::eta(0.5, 1.0, 1.0).unwrap();
        assert_eq!(pdf_eta_mu(&p, &siso, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn special_case_table() {
        let r = special_case_params(SpecialCase::Rayleigh, 1.0).unwrap();
        assert_eq!((r.mu(), r.kappa(), r.m()), (1.0, 0.0, M_LARGE));
        let q = 0.5;
        let h = special_case_params(SpecialCase::Hoyt { q }, 1.0).unwrap();
        assert_eq!((h.mu(), h.m()), (1.0, 0.5));
        assert!((h.kappa() - (1.0 - q * q) / (2.0 * q * q)).abs() < 1e-15);
        let e = special_case_params(SpecialCase::EtaMu { eta: 0.25, mu: 1.5 }, 1.0).unwrap();
        assert_eq!((e.mu(), e.kappa(), e.m()), (3.0, 1.5, 1.5));
        assert!(special_case_params(SpecialCase::Hoyt { q: 1.5 }, 1.0).is_err());
        assert!(special_case_params(SpecialCase::NakagamiM { m: 0.4 }, 1.0).is_err());
    }

    #[test]
    fn zeta_below_beta() {
        for &(k, mu, m) in &[(0.1, 0.5, 0.5), (10.0, 4.0, 10.0), (3.0, 1.0, 0.5)] {
            let p = KappaMuShadowedParams::new(k, mu, m, 1.0).unwrap();
            let c = compact_kms(&p, &MimoConfig::new(2, 2).unwrap());
            assert!(c.zeta < c.beta);
            assert!(rel(c.zeta / c.beta, c.mu_tilde * k / (c.mu_tilde * k + c.m_tilde)) < 1e-14);
        }
    }
}
