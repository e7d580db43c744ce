//! Average error rates of space-time block coded MIMO links over generalized
//! fading (η–μ, λ–μ, κ–μ shadowed) with additive white generalized Gaussian
//! noise.
//!
//! The crate provides closed-form ABER expressions built on a four-term
//! exponential approximation of the generalized Q-function, and an
//! independent adaptive-quadrature oracle to check them against.
//!
//! ```
//! use aber_core::{aber, fading, modulation::Modulation, noise::QApprox};
//!
//! let params = fading::KappaMuShadowedParams::new(2.0, 2.0, 1.0, 10.0).unwrap();
//! let mimo = fading::MimoConfig::new(2, 2).unwrap();
//! let compact = fading::compact_kms(&params, &mimo);
//! let fit = QApprox::builtin(2.0).unwrap();
//! let consts = Modulation::Bpsk.constants();
//! let p = aber::aber_kms_closed(&compact, &fit, consts).unwrap();
//! assert!(p > 0.0 && p < 1e-2);
//! ```

// `!(x > 0.0)` style guards are deliberate: they reject NaN along with the
// out-of-range values. Tabulated constants keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod aber;
pub mod config;
pub mod error;
pub mod fading;
pub mod modulation;
pub mod nlfit;
pub mod noise;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};

/// Converts an SNR in dB to linear power units, 10^(dB/10).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
