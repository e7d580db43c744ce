//! Coherent modulation schemes and their error-rate constants.
//!
//! Each scheme maps to a pair (𝒜, ℬ) such that the conditional symbol error
//! probability is 𝒜 · Q_a(√(ℬγ)). The M-PAM and rectangular M-QAM
//! coefficients are the nearest-neighbour values 2(M−1)/M and 4(√M−1)/√M.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Constants (𝒜, ℬ) of the conditional error probability 𝒜·Q_a(√(ℬγ)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorConstants {
    /// 𝒜, multiplies the Q-function.
    pub coefficient: f64,
    /// ℬ, scales the SNR inside the Q-function.
    pub snr_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    Bfsk,
    Bpsk,
    Qpsk,
    Pam(u32),
    Psk(u32),
    QamRect(u32),
    QamNonRect(u32),
}

fn perfect_square_root(m: u32) -> Option<u32> {
    let r = (m as f64).sqrt().round() as u32;
    (r * r == m).then_some(r)
}

impl Modulation {
    /// Validates the constellation order for the M-ary families.
    pub fn validate(self) -> Result<Self> {
        let bad = |m: u32, reason| Err(Error::InvalidParameter { name: "M", value: m as f64, reason });
        match self {
            Modulation::Pam(m) | Modulation::QamNonRect(m) if m < 2 => bad(m, "order must be at least 2"),
            Modulation::Psk(m) if m < 2 || !m.is_power_of_two() => bad(m, "M-PSK order must be a power of two"),
            Modulation::QamRect(m) if m < 4 || perfect_square_root(m).is_none() => {
                bad(m, "rectangular M-QAM order must be a perfect square")
            }
            other => Ok(other),
        }
    }

    /// (𝒜, ℬ) for this scheme.
    pub fn constants(self) -> ErrorConstants {
        let (coefficient, snr_scale) = match self {
            Modulation::Bfsk => (1.0, 1.0),
            Modulation::Bpsk => (1.0, 2.0),
            Modulation::Qpsk => (2.0, 1.0),
            Modulation::Pam(m) => {
                let m = m as f64;
                (2.0 * (m - 1.0) / m, 6.0 / (m * m - 1.0))
            }
            Modulation::Psk(m) => {
                let s = (std::f64::consts::PI / m as f64).sin();
                (2.0, 2.0 * s * s)
            }
            Modulation::QamRect(m) => {
                let r = (m as f64).sqrt();
                (4.0 * (r - 1.0) / r, 3.0 / (m as f64 - 1.0))
            }
            Modulation::QamNonRect(m) => (4.0, 3.0 / (m as f64 - 1.0)),
        };
        ErrorConstants { coefficient, snr_scale }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulation::Bfsk => write!(f, "bfsk"),
            Modulation::Bpsk => write!(f, "bpsk"),
            Modulation::Qpsk => write!(f, "qpsk"),
            Modulation::Pam(m) => write!(f, "{m}pam"),
            Modulation::Psk(m) => write!(f, "{m}psk"),
            Modulation::QamRect(m) => write!(f, "{m}qam"),
            Modulation::QamNonRect(m) => {
                if perfect_square_root(*m).is_some() {
                    write!(f, "{m}qam-nonrect")
                } else {
                    write!(f, "{m}qam")
                }
            }
        }
    }
}

impl FromStr for Modulation {
    type Err = Error;

    /// Accepts "bfsk", "bpsk", "qpsk", "4qam", "<M>pam", "<M>psk", "<M>qam"
    /// with an optional "-rect" / "-nonrect" qualifier on QAM. Unqualified QAM
    /// is rectangular when M is a perfect square.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let invalid = || Error::InvalidParameter { name: "modulation", value: f64::NAN, reason: "unrecognized scheme" };
        let parsed = match lower.as_str() {
            "bfsk" => Modulation::Bfsk,
            "bpsk" => Modulation::Bpsk,
            "qpsk" | "4qam" => Modulation::Qpsk,
            _ => {
                let (body, qualifier) = match lower.split_once('-') {
                    Some((b, q)) => (b, Some(q)),
                    None => (lower.as_str(), None),
                };
                let digits: String = body.chars().take_while(|c| c.is_ascii_digit()).collect();
                let family = &body[digits.len()..];
                let m: u32 = digits.parse().map_err(|_| invalid())?;
                match (family, qualifier) {
                    ("pam", None) => Modulation::Pam(m),
                    ("psk", None) => Modulation::Psk(m),
                    ("qam", Some("rect")) => Modulation::QamRect(m),
                    ("qam", Some("nonrect")) => Modulation::QamNonRect(m),
                    ("qam", None) if perfect_square_root(m).is_some() => Modulation::QamRect(m),
                    ("qam", None) => Modulation::QamNonRect(m),
                    _ => return Err(invalid()),
                }
            }
        };
        parsed.validate()
    }
}

impl Serialize for Modulation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Modulation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts(s: &str) -> (f64, f64) {
        let c = s.parse::<Modulation>().unwrap().constants();
        (c.coefficient, c.snr_scale)
    }

    #[test]
    fn tabulated_constants() {
        assert_eq!(consts("bfsk"), (1.0, 1.0));
        assert_eq!(consts("bpsk"), (1.0, 2.0));
        assert_eq!(consts("qpsk"), (2.0, 1.0));
        assert_eq!(consts("16qam"), (3.0, 0.2));
        let (a, b) = consts("8psk");
        assert_eq!(a, 2.0);
        assert!((b - 0.2928932188134524).abs() < 1e-15);
        let (a, b) = consts("4pam");
        assert_eq!((a, b), (1.5, 0.4));
    }

    #[test]
    fn qpsk_matches_four_psk() {
        let q = Modulation::Qpsk.constants();
        let p = Modulation::Psk(4).constants();
        assert_eq!(q.coefficient, p.coefficient);
        assert!((q.snr_scale - p.snr_scale).abs() < 1e-15);
    }

    #[test]
    fn snr_scale_non_increasing_in_order() {
        let families: [fn(u32) -> Modulation; 3] = [Modulation::Pam, Modulation::Psk, Modulation::QamNonRect];
        for fam in families {
            let orders = [2u32, 4, 8, 16, 32, 64];
            let b: Vec<f64> = orders.iter().map(|&m| fam(m).constants().snr_scale).collect();
            assert!(b.windows(2).all(|w| w[1] <= w[0]), "{b:?}");
        }
        let b: Vec<f64> = [4u32, 16, 64, 256].iter().map(|&m| Modulation::QamRect(m).constants().snr_scale).collect();
        assert!(b.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn parsing_and_qualifiers() {
        assert_eq!("32qam".parse::<Modulation>().unwrap(), Modulation::QamNonRect(32));
        assert_eq!("16qam-nonrect".parse::<Modulation>().unwrap(), Modulation::QamNonRect(16));
        assert_eq!("64QAM-rect".parse::<Modulation>().unwrap(), Modulation::QamRect(64));
        assert!("32qam-rect".parse::<Modulation>().is_err());
        assert!("6psk".parse::<Modulation>().is_err());
        assert!("1pam".parse::<Modulation>().is_err());
        assert!("ook".parse::<Modulation>().is_err());
        for s in ["bpsk", "8psk", "16qam", "32qam", "16qam-nonrect", "4pam"] {
            let m: Modulation = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
    }
}
