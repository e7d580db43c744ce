//! Real-valued special functions: gamma family, modified Bessel I_ν, and the
//! ₁F₁ / ₂F₁ hypergeometric functions.
//!
//! All functions are pure. Series stop once the newest term falls below
//! `1e-16` of the running sum and fail with [`crate::Error::Convergence`]
//! after 10 000 terms.

mod bessel;
mod gamma;
mod hypergeometric;

pub use bessel::{bessel_i, ln_bessel_i};
pub use gamma::{
    digamma, gamma, ln_gamma, ln_gamma_signed, recip_gamma, regularized_upper_gamma,
    upper_incomplete_gamma,
};
pub use hypergeometric::{gauss_2f1, kummer_1f1, ln_kummer_1f1};

pub(crate) const TAIL_TOL: f64 = 1e-16;
pub(crate) const MAX_TERMS: usize = 10_000;
/// ln(f64::MAX)
pub(crate) const LN_MAX: f64 = 709.782712893384;
