//! JSON scenario descriptions.
//!
//! ```json
//! {
//!   "fading": {"model": "kappa-mu-shadowed", "kappa": 2, "mu": 2, "m": 1},
//!   "mimo": {"nt": 2, "nr": 2},
//!   "noise": {"a": 2, "fit": "table"},
//!   "modulation": "bpsk",
//!   "snr_db": {"start": 0, "step": 2, "stop": 30}
//! }
//! ```
//!
//! Fading models: `kappa-mu-shadowed` (kappa, mu, m), `eta-mu` (format 1 with
//! eta, or format 2 with lambda; mu), and the named special cases
//! `kappa-mu` (kappa, mu), `rician-shadowed` (k, m), `hoyt` (q), `rician` (k),
//! `nakagami-m` (m), `rayleigh`, `one-sided-gaussian`. An optional
//! `mean_power` (linear) or `mean_power_db` sets γ̄; sweeps override it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::aber::AberScenario;
use crate::error::Error;
use crate::fading::{special_case_params, EtaMuFormat, EtaMuParams, FadingSpec, KappaMuShadowedParams, MimoConfig, SpecialCase};
use crate::modulation::Modulation;
use crate::nlfit::fit_q_approx;
use crate::noise::QApprox;

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// Malformed JSON or unknown keys.
    Parse(String),
    /// A field is missing or holds an invalid value.
    Field { field: String, reason: String },
    /// Building the scenario needed a computation that failed.
    Numerical(Error),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse(msg) => write!(f, "config parse error: {msg}"),
            ConfigError::Field { field, reason } => write!(f, "config field `{field}`: {reason}"),
            ConfigError::Numerical(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn field_err(field: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError::Field { field: field.to_string(), reason: reason.to_string() }
}

/// Maps a parameter error onto the JSON field that carried it.
fn param_err(prefix: &str, e: Error) -> ConfigError {
    match e {
        Error::InvalidParameter { name, value, reason } => field_err(&format!("{prefix}.{name}"), format!("{value}: {reason}")),
        other => field_err(prefix, other),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingConfig {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_power: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_power_db: Option<f64>,
}

impl FadingConfig {
    fn need(&self, value: Option<f64>, name: &str) -> Result<f64, ConfigError> {
        value.ok_or_else(|| field_err(&format!("fading.{name}"), format!("required for model `{}`", self.model)))
    }

    pub fn mean_power_linear(&self) -> Result<f64, ConfigError> {
        match (self.mean_power, self.mean_power_db) {
            (Some(_), Some(_)) => Err(field_err("fading.mean_power", "give mean_power or mean_power_db, not both")),
            (Some(p), None) => Ok(p),
            (None, Some(db)) => Ok(crate::db_to_linear(db)),
            (None, None) => Ok(1.0),
        }
    }

    pub fn to_spec(&self) -> Result<FadingSpec, ConfigError> {
        let gbar = self.mean_power_linear()?;
        let special = |case| {
            special_case_params(case, gbar).map(FadingSpec::KappaMuShadowed).map_err(|e| param_err("fading", e))
        };
        match self.model.as_str() {
            "kappa-mu-shadowed" => {
                let p = KappaMuShadowedParams::new(
                    self.need(self.kappa, "kappa")?,
                    self.need(self.mu, "mu")?,
                    self.need(self.m, "m")?,
                    gbar,
                )
                .map_err(|e| param_err("fading", e))?;
                Ok(FadingSpec::KappaMuShadowed(p))
            }
            "eta-mu" | "lambda-mu" => {
                let default_format = if self.model == "lambda-mu" || self.lambda.is_some() { 2 } else { 1 };
                let (format, shape) = match self.format.unwrap_or(default_format) {
                    1 => (EtaMuFormat::Eta, self.need(self.eta, "eta")?),
                    2 => (EtaMuFormat::Lambda, self.need(self.lambda, "lambda")?),
                    other => return Err(field_err("fading.format", format!("{other} is not 1 or 2"))),
                };
                let p = EtaMuParams::new(format, shape, self.need(self.mu, "mu")?, gbar)
                    .map_err(|e| param_err("fading", e))?;
                Ok(FadingSpec::EtaMu(p))
            }
            "kappa-mu" => special(SpecialCase::KappaMu { kappa: self.need(self.kappa, "kappa")?, mu: self.need(self.mu, "mu")? }),
            "rician-shadowed" => special(SpecialCase::RicianShadowed { k: self.need(self.k, "k")?, m: self.need(self.m, "m")? }),
            "hoyt" => special(SpecialCase::Hoyt { q: self.need(self.q, "q")? }),
            "rician" => special(SpecialCase::Rician { k: self.need(self.k, "k")? }),
            "nakagami-m" => special(SpecialCase::NakagamiM { m: self.need(self.m, "m")? }),
            "rayleigh" => special(SpecialCase::Rayleigh),
            "one-sided-gaussian" => special(SpecialCase::OneSidedGaussian),
            other => Err(field_err("fading.model", format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MimoSection {
    pub nt: u32,
    pub nr: u32,
}

impl Default for MimoSection {
    fn default() -> Self {
        Self { nt: 1, nr: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitChoice {
    #[default]
    Table,
    Refit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub a: f64,
    #[serde(default)]
    pub fit: FitChoice,
}

impl NoiseSection {
    pub fn resolve(&self) -> Result<QApprox, ConfigError> {
        crate::noise::NoiseModel::new(self.a).map_err(|e| field_err("noise.a", e))?;
        match self.fit {
            FitChoice::Table => QApprox::builtin(self.a)
                .map_err(|_| field_err("noise.fit", format!("no builtin row for a = {}; use \"refit\"", self.a))),
            FitChoice::Refit => fit_q_approx(self.a, None).map_err(ConfigError::Numerical),
        }
    }
}

/// Inclusive dB grid start, start+step, …, ≤ stop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrRange {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl SnrRange {
    pub fn grid(&self) -> Result<Vec<f64>, ConfigError> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(field_err("snr_db", "start and stop must be finite"));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(field_err("snr_db.step", "must be positive"));
        }
        if self.stop < self.start {
            return Err(field_err("snr_db.stop", "must not be below start"));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        if n > 100_000 {
            return Err(field_err("snr_db.step", "grid has more than 100000 points"));
        }
        Ok((0..n).map(|k| self.start + k as f64 * self.step).collect())
    }
}

impl std::str::FromStr for SnrRange {
    type Err = ConfigError;

    /// "start:step:stop" in dB.
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(field_err("snr", format!("`{s}` is not start:step:stop")));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| field_err("snr", format!("`{t}` is not a number")));
        let range = SnrRange { start: num(parts[0])?, step: num(parts[1])?, stop: num(parts[2])? };
        range.grid()?;
        Ok(range)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub fading: FadingConfig,
    #[serde(default)]
    pub mimo: MimoSection,
    pub noise: NoiseSection,
    pub modulation: String,
    pub snr_db: SnrRange,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<AberScenario, ConfigError> {
        let fading = self.fading.to_spec()?;
        let mimo = MimoConfig::new(self.mimo.nt, self.mimo.nr).map_err(|e| param_err("mimo", e))?;
        let modulation: Modulation =
            self.modulation.parse().map_err(|_| field_err("modulation", format!("`{}` is not supported", self.modulation)))?;
        let grid = self.snr_db.grid()?;
        let fit = self.noise.resolve()?;
        AberScenario::new(fading, mimo, fit, modulation, grid).map_err(|e| field_err("snr_db", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "fading": {"model": "kappa-mu-shadowed", "kappa": 2, "mu": 2, "m": 1},
        "mimo": {"nt": 2, "nr": 2},
        "noise": {"a": 2, "fit": "table"},
        "modulation": "bpsk",
        "snr_db": {"start": 0, "step": 2, "stop": 30}
    }"#;

    #[test]
    fn sample_builds() {
        let s = ScenarioConfig::from_json(SAMPLE).unwrap().build().unwrap();
        assert_eq!(s.snr_db().len(), 16);
        assert_eq!(s.mimo.branches(), 4.0);
    }

    #[test]
    fn grid_arithmetic() {
        let g: SnrRange = "0:2:30".parse().unwrap();
        assert_eq!(g.grid().unwrap().len(), 16);
        let g: SnrRange = "0:0.1:1".parse().unwrap();
        assert_eq!(g.grid().unwrap().len(), 11);
        assert!("0:2".parse::<SnrRange>().is_err());
        assert!("0:-1:10".parse::<SnrRange>().is_err());
        assert!("a:1:2".parse::<SnrRange>().is_err());
    }

    #[test]
    fn errors_name_fields() {
        let bad = SAMPLE.replace("\"kappa\": 2,", "");
        match ScenarioConfig::from_json(&bad).unwrap().build() {
            Err(ConfigError::Field { field, .. }) => assert_eq!(field, "fading.kappa"),
            other => panic!("{other:?}"),
        }
        let bad = SAMPLE.replace("\"mu\": 2", "\"mu\": -2");
        match ScenarioConfig::from_json(&bad).unwrap().build() {
            Err(ConfigError::Field { field, .. }) => assert_eq!(field, "fading.mu"),
            other => panic!("{other:?}"),
        }
        let bad = SAMPLE.replace("\"a\": 2,", "\"a\": 3,");
        match ScenarioConfig::from_json(&bad).unwrap().build() {
            Err(ConfigError::Field { field, .. }) => assert_eq!(field, "noise.fit"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(ScenarioConfig::from_json("{"), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn special_models() {
        for (json, expect_mu) in [
            (r#"{"model": "rayleigh"}"#, 1.0),
            (r#"{"model": "nakagami-m", "m": 3}"#, 3.0),
            (r#"{"model": "one-sided-gaussian"}"#, 0.5),
            (r#"{"model": "hoyt", "q": 0.5}"#, 1.0),
        ] {
            let cfg: FadingConfig = serde_json::from_str(json).unwrap();
            match cfg.to_spec().unwrap() {
                FadingSpec::KappaMuShadowed(p) => assert_eq!(p.mu(), expect_mu),
                other => panic!("{other:?}"),
            }
        }
        let cfg: FadingConfig = serde_json::from_str(r#"{"model": "eta-mu", "format": 2, "lambda": 0.3, "mu": 1}"#).unwrap();
        assert!(matches!(cfg.to_spec().unwrap(), FadingSpec::EtaMu(_)));
        let cfg: FadingConfig = serde_json::from_str(r#"{"model": "eta-mu", "eta": 0.5, "mu": 1, "mean_power_db": 10}"#).unwrap();
        assert!((cfg.to_spec().unwrap().mean_power() - 10.0).abs() < 1e-12);
    }
}
