use std::fmt;

use crate::noise::QApprox;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside a function's domain.
    Domain { func: &'static str, detail: String },
    /// Series, continued fraction or iteration hit its hard cap.
    Convergence { func: &'static str, iterations: usize },
    /// Result does not fit in an `f64`; `ln_value` is the natural log of the
    /// magnitude that would have been returned.
    Overflow { func: &'static str, ln_value: f64 },
    /// A model parameter violates its invariant.
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    /// Noise shape outside the supported interval.
    NoiseShapeOutOfRange { a: f64 },
    /// No builtin fitting row exists for this noise shape.
    NotTabulated { a: f64 },
    /// The eta-mu Bessel kernel has H = 0 and must use its Nakagami limit.
    DegenerateH,
    /// Residual evaluation produced NaN or infinity.
    NonFiniteResidual { params: Vec<f64> },
    /// Every restart of the Q-approximation fit failed to converge.
    FitFailed { best: Box<QApprox>, max_abs_dev: f64 },
    /// Adaptive integration exhausted its interval budget.
    Integration { partial: f64, abs_error: f64, intervals: usize },
    /// A closed-form precondition does not hold.
    Precondition { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { func, detail } => write!(f, "{func}: argument outside domain ({detail})"),
            Error::Convergence { func, iterations } => {
                write!(f, "{func}: no convergence after {iterations} iterations")
            }
            Error::Overflow { func, ln_value } => {
                write!(f, "{func}: result overflows f64 (ln value = {ln_value})")
            }
            Error::InvalidParameter { name, value, reason } => {
                write!(f, "invalid parameter {name} = {value}: {reason}")
            }
            Error::NoiseShapeOutOfRange { a } => {
                write!(f, "noise shape a = {a} outside supported range [0.25, 4]")
            }
            Error::NotTabulated { a } => write!(f, "no builtin Q-approximation row for a = {a}"),
            Error::DegenerateH => write!(f, "eta-mu kernel has H = 0; use the Nakagami limit"),
            Error::NonFiniteResidual { params } => {
                write!(f, "non-finite residual at parameters {params:?}")
            }
            Error::FitFailed { best, max_abs_dev } => write!(
                f,
                "Q-approximation fit did not converge for a = {} (best max deviation {max_abs_dev:e})",
                best.a
            ),
            Error::Integration { partial, abs_error, intervals } => write!(
                f,
                "integration did not converge after {intervals} intervals (partial {partial:e}, error {abs_error:e})"
            ),
            Error::Precondition { detail } => write!(f, "precondition violated: {detail}"),
        }
    }
}

impl std::error::Error for Error {}

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { func, detail: detail.into() }
}
