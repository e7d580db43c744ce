//! Additive white generalized Gaussian noise (AWGGN).
//!
//! The generalized Q-function
//!
//! ```text
//! Q_a(x) = Λ₀^(2/a − 1) / (2 Γ(1/a)) · Γ(1/a, Λ₀^a x^a),   Λ₀ = √(Γ(3/a) / Γ(1/a))
//! ```
//!
//! is evaluated exactly as written, prefactor included. For a ≠ 2 this makes
//! Q_a(0) = Λ₀^(2/a − 1)/2 differ from 1/2, and the builtin fitting rows
//! inherit that scaling (their weights sum to Q_a(0)). The probabilistically
//! normalized variant, with Q̂_a(0) = 1/2 for every a, is available as
//! [`NoiseModel::q_normalized`].
//!
//! [`QApprox`] holds the four-exponential approximation
//! Q_a(√x) ≈ Σ pᵢ exp(−qᵢ x). Note the squared argument.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, regularized_upper_gamma};

pub const MIN_SHAPE: f64 = 0.25;
pub const MAX_SHAPE: f64 = 4.0;

/// Generalized Gaussian noise with shape parameter `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    a: f64,
    lambda0: f64,
    /// Λ₀^(2/a − 1) / 2, the literal Q_a(0).
    origin: f64,
}

impl NoiseModel {
    /// Builds the model for `a` in [0.25, 4].
    pub fn new(a: f64) -> Result<Self> {
        if !(MIN_SHAPE..=MAX_SHAPE).contains(&a) {
            return Err(Error::NoiseShapeOutOfRange { a });
        }
        let ln_lambda0 = 0.5 * (ln_gamma(3.0 / a)? - ln_gamma(1.0 / a)?);
        let lambda0 = ln_lambda0.exp();
        let origin = 0.5 * ((2.0 / a - 1.0) * ln_lambda0).exp();
        Ok(Self { a, lambda0, origin })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Λ₀ = √(Γ(3/a)/Γ(1/a)).
    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    /// Literal generalized Q-function at `x >= 0`.
    pub fn q_exact(&self, x: f64) -> Result<f64> {
        Ok(2.0 * self.origin * self.q_normalized(x)?)
    }

    /// Γ(1/a, Λ₀^a x^a) / (2 Γ(1/a)); equals 1/2 at the origin for every a.
    pub fn q_normalized(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(crate::error::domain("q_exact", format!("x = {x} must be non-negative")));
        }
        let arg = (self.lambda0 * x).powf(self.a);
        Ok(0.5 * regularized_upper_gamma(1.0 / self.a, arg)?)
    }

    /// Literal Q_a(0) = Λ₀^(2/a − 1) / 2.
    pub fn q_at_origin(&self) -> f64 {
        self.origin
    }
}

/// Where a [`QApprox`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitSource {
    BuiltinTable,
    Refit,
}

/// Q_a(√x) ≈ Σᵢ pᵢ exp(−qᵢ x), four terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QApprox {
    pub a: f64,
    pub p: [f64; 4],
    pub q: [f64; 4],
    pub source: FitSource,
}

/// Builtin fitting rows: (a, p₁..p₄, q₁..q₄).
pub const TABLE: [(f64, [f64; 4], [f64; 4]); 5] = [
    (0.5, [44.920, 126.460, 389.400, 96.540], [0.130, 2.311, 12.52, 0.629]),
    (1.0, [0.068, 0.202, 0.182, 0.255], [0.217, 2.185, 0.657, 12.640]),
    (1.5, [0.065, 0.149, 0.136, 0.125], [0.341, 0.712, 10.57, 1.945]),
    (2.0, [0.099, 0.157, 0.124, 0.119], [1.981, 0.534, 0.852, 10.268]),
    (2.5, [0.126, 1.104, -1.125, 0.442], [9.395, 0.833, 0.994, 1.292]),
];

impl QApprox {
    /// Validates and builds an approximation; every decay rate must be positive.
    pub fn new(a: f64, p: [f64; 4], q: [f64; 4], source: FitSource) -> Result<Self> {
        for (i, &qi) in q.iter().enumerate() {
            if !(qi > 0.0) || !qi.is_finite() {
                return Err(Error::InvalidParameter {
                    name: ["q1", "q2", "q3", "q4"][i],
                    value: qi,
                    reason: "decay rates must be positive",
                });
            }
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter { name: "p", value: f64::NAN, reason: "weights must be finite" });
        }
        Ok(Self { a, p, q, source })
    }

    /// The tabulated row for a ∈ {0.5, 1, 1.5, 2, 2.5}.
    pub fn builtin(a: f64) -> Result<Self> {
        TABLE
            .iter()
            .find(|row| row.0 == a)
            .map(|&(a, p, q)| Self { a, p, q, source: FitSource::BuiltinTable })
            .ok_or(Error::NotTabulated { a })
    }

    /// All builtin rows in ascending a.
    pub fn builtin_table() -> Vec<Self> {
        TABLE.iter().map(|&(a, p, q)| Self { a, p, q, source: FitSource::BuiltinTable }).collect()
    }

    /// Σ pᵢ exp(−qᵢ x) ≈ Q_a(√x).
    pub fn eval(&self, x: f64) -> f64 {
        self.p.iter().zip(&self.q).map(|(p, q)| p * (-q * x).exp()).sum()
    }

    /// Σ pᵢ, the approximation's value at the origin.
    pub fn weight_sum(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Terms reordered by ascending decay rate.
    pub fn canonical(mut self) -> Self {
        let mut pairs: Vec<(f64, f64)> = self.p.iter().copied().zip(self.q.iter().copied()).collect();
        pairs.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
        for (i, (p, q)) in pairs.into_iter().enumerate() {
            self.p[i] = p;
            self.q[i] = q;
        }
        self
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.p.iter_mut().for_each(|p| *p *= factor);
        out
    }
}

/// Conditional error weight W(x) ≈ Q_a(√x), as used inside the ABER average.
pub trait ConditionalError: Sync {
    fn q_sqrt(&self, x: f64) -> Result<f64>;
    /// Value at the origin, an upper bound of the weight.
    fn at_origin(&self) -> f64;
}

impl ConditionalError for NoiseModel {
    fn q_sqrt(&self, x: f64) -> Result<f64> {
        self.q_exact(x.sqrt())
    }

    fn at_origin(&self) -> f64 {
        self.origin
    }
}

impl ConditionalError for QApprox {
    fn q_sqrt(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x))
    }

    fn at_origin(&self) -> f64 {
        self.weight_sum()
    }
}

/// max over `grid` of |fit(x) − Q_a(√x)|.
pub fn max_abs_deviation(fit: &QApprox, model: &NoiseModel, grid: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in grid {
        let d = (fit.eval(x) - model.q_exact(x.sqrt())?).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}
