//! Angles carried either exactly, as a rational multiple of π, or as plain
//! radians.
//!
//! Exactness matters because the limit-circle angle set has measure zero:
//! comparing floats against it is meaningless, so every angle supplied as
//! `p/q pi` keeps its rational form and classification compares rationals.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used wherever a float angle has to be compared with an exact one.
pub const FLOAT_ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("angle denominator must be nonzero")]
    ZeroDenominator,
    #[error("angle radians must be finite, got {0}")]
    NonFinite(String),
    #[error("cannot parse angle {0:?}: expected `p/q pi`, `p pi`, `pi` or radians")]
    Parse(String),
}

/// An angle normalized to (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    exact: Option<Rational64>,
    radians: f64,
}

impl Angle {
    pub fn zero() -> Self {
        Self::from_pi_ratio(Rational64::from_integer(0))
    }

    /// `num/den · π`, normalized.
    pub fn from_pi_fraction(num: i64, den: i64) -> Result<Self, AngleError> {
        if den == 0 {
            return Err(AngleError::ZeroDenominator);
        }
        Ok(Self::from_pi_ratio(Rational64::new(num, den)))
    }

    pub fn from_pi_ratio(r: Rational64) -> Self {
        let r = normalize_pi_ratio(r);
        Self {
            exact: Some(r),
            radians: ratio_to_f64(r) * PI,
        }
    }

    pub fn from_radians(x: f64) -> Result<Self, AngleError> {
        if !x.is_finite() {
            return Err(AngleError::NonFinite(x.to_string()));
        }
        Ok(Self {
            exact: None,
            radians: normalize_radians(x),
        })
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    /// The rational multiple of π, when known exactly.
    pub fn pi_ratio(&self) -> Option<Rational64> {
        self.exact
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Negation preserves exactness.
    pub fn neg(&self) -> Self {
        match self.exact {
            Some(r) => Self::from_pi_ratio(-r),
            None => Self {
                exact: None,
                radians: normalize_radians(-self.radians),
            },
        }
    }

    /// Sum of two angles; exact only if both are.
    pub fn add(&self, other: &Angle) -> Self {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => Self::from_pi_ratio(a + b),
            _ => Self {
                exact: None,
                radians: normalize_radians(self.radians + other.radians),
            },
        }
    }

    /// Integer multiple, exact when `self` is.
    pub fn scale(&self, k: i64) -> Self {
        match self.exact {
            Some(r) => Self::from_pi_ratio(r * k),
            None => Self {
                exact: None,
                radians: normalize_radians(self.radians * k as f64),
            },
        }
    }

    /// Signed difference `self − other` normalized to (−π, π].
    pub fn diff(&self, other: &Angle) -> Self {
        self.add(&other.neg())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) if *r.denom() == 1 => write!(f, "{} pi", r.numer()),
            Some(r) => write!(f, "{}/{} pi", r.numer(), r.denom()),
            None => write!(f, "{}", self.radians),
        }
    }
}

impl FromStr for Angle {
    type Err = AngleError;

    /// Accepts `p/q pi`, `p pi`, `pi`, `-pi`, `p/q*pi`, or a float in radians.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if let Some(head) = lower.strip_suffix("pi") {
            let head = head.trim().trim_end_matches('*').trim();
            let ratio = match head {
                "" | "+" => Rational64::from_integer(1),
                "-" => Rational64::from_integer(-1),
                _ => parse_ratio(head).ok_or_else(|| AngleError::Parse(s.to_string()))?,
            };
            return Ok(Angle::from_pi_ratio(ratio));
        }
        let x: f64 = t.parse().map_err(|_| AngleError::Parse(s.to_string()))?;
        Angle::from_radians(x)
    }
}

fn parse_ratio(s: &str) -> Option<Rational64> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Rational64::new(n, d))
        }
        None => s.trim().parse::<i64>().ok().map(Rational64::from_integer),
    }
}

/// Maps a multiple of π into (−1, 1].
pub fn normalize_pi_ratio(r: Rational64) -> Rational64 {
    let two = Rational64::from_integer(2);
    let shift = ((r - Rational64::from_integer(1)) / two).ceil();
    r - shift * two
}

pub fn normalize_radians(x: f64) -> f64 {
    let y = x - 2.0 * PI * ((x - PI) / (2.0 * PI)).ceil();
    // ceil can land exactly on −π after rounding
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

pub fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Serialize, Deserialize)]
struct AngleRepr {
    pi_num: Option<i64>,
    pi_den: Option<i64>,
    radians: f64,
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        AngleRepr {
            pi_num: self.exact.map(|r| *r.numer()),
            pi_den: self.exact.map(|r| *r.denom()),
            radians: self.radians,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = AngleRepr::deserialize(deserializer)?;
        match (repr.pi_num, repr.pi_den) {
            (Some(n), Some(d)) => Angle::from_pi_fraction(n, d).map_err(D::Error::custom),
            (None, None) => Angle::from_radians(repr.radians).map_err(D::Error::custom),
            _ => Err(D::Error::custom("pi_num and pi_den must both be present or both be null")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_and_approx_agree() {
        let a = Angle::from_pi_fraction(1, 3).unwrap();
        assert!((a.radians() - PI / 3.0).abs() < 1e-15);
        let b = Angle::from_pi_fraction(7, 3).unwrap();
        assert_eq!(b.pi_ratio(), Some(Rational64::new(1, 3)));
        assert_eq!(Angle::from_pi_fraction(-1, 1).unwrap().pi_ratio(), Some(Rational64::from_integer(1)));
    }

    #[test]
    fn radians_normalize_to_half_open_interval() {
        assert!((normalize_radians(-PI) - PI).abs() < 1e-15);
        assert!((normalize_radians(3.0 * PI) - PI).abs() < 1e-12);
        assert!((normalize_radians(0.25) - 0.25).abs() < 1e-15);
        assert!((normalize_radians(2.0 * PI + 0.25) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn parses_cli_syntax() {
        let a: Angle = "1/3 pi".parse().unwrap();
        assert_eq!(a.pi_ratio(), Some(Rational64::new(1, 3)));
        let b: Angle = "-2/7pi".parse().unwrap();
        assert_eq!(b.pi_ratio(), Some(Rational64::new(-2, 7)));
        let c: Angle = "pi".parse().unwrap();
        assert_eq!(c.pi_ratio(), Some(Rational64::from_integer(1)));
        let d: Angle = "0.3".parse().unwrap();
        assert!(!d.is_exact());
        assert!("1/0 pi".parse::<Angle>().is_err());
        assert!("abc".parse::<Angle>().is_err());
    }

    #[test]
    fn json_sidecar_round_trips() {
        let a = Angle::from_pi_fraction(-3, 10).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"pi_num\":-3"));
        let back: Angle = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let f = Angle::from_radians(0.2).unwrap();
        let back: Angle = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
