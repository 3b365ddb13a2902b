//! Values in `ℝ ∪ {+∞}`.
//!
//! Objective values and gauge values may be `+∞`. `+∞` absorbs under
//! addition, and a zero weight annihilates it (`0 · ∞ = 0`), which is the
//! convention weighted perturbation series rely on when a weight vanishes.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An extended real number in `ℝ ∪ {+∞}`. Never NaN, never `-∞`.
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug, Default)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(0.0);
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);

    /// Returns `None` for NaN and `-∞`.
    pub fn new(v: f64) -> Option<Self> {
        if v.is_nan() || v == f64::NEG_INFINITY {
            None
        } else {
            Some(ExtReal(v))
        }
    }

    /// Wraps a finite value.
    ///
    /// Panics if `v` is not finite.
    pub fn finite(v: f64) -> Self {
        assert!(v.is_finite(), "ExtReal::finite called with {v}");
        ExtReal(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    /// Multiplies by a nonnegative weight with `0 · ∞ = 0`.
    pub fn scale(self, weight: f64) -> Self {
        debug_assert!(weight >= 0.0);
        if weight == 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal(self.0 * weight)
        }
    }

    /// `self - other` as a plain float; `+∞` when `self` is infinite and
    /// `other` finite. Returns NaN only for `∞ - ∞`.
    pub fn minus(self, other: ExtReal) -> f64 {
        self.0 - other.0
    }
}

impl Eq for ExtReal {}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("ExtReal is never NaN")
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        ExtReal(self.0 + rhs.0)
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        debug_assert!(rhs.is_finite());
        ExtReal(self.0 + rhs)
    }
}

impl Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, |a, b| a + b)
    }
}

impl From<f64> for ExtReal {
    /// Panics on NaN or `-∞`.
    fn from(v: f64) -> Self {
        ExtReal::new(v).unwrap_or_else(|| panic!("{v} is not an extended real"))
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseExtRealError(pub String);

impl fmt::Display for ParseExtRealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not an extended real: {:?}", self.0)
    }
}

impl std::error::Error for ParseExtRealError {}

impl FromStr for ExtReal {
    type Err = ParseExtRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => return Ok(ExtReal::INFINITY),
            _ => {}
        }
        t.parse::<f64>()
            .ok()
            .and_then(ExtReal::new)
            .ok_or_else(|| ParseExtRealError(s.to_string()))
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_f64(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = deserialize_f64(d)?;
        ExtReal::new(v).ok_or_else(|| serde::de::Error::custom("NaN or -inf"))
    }
}

/// Serializes a float, writing non-finite values as the strings
/// `"inf"`, `"-inf"` or `"nan"` so JSON output stays valid.
pub fn serialize_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub fn deserialize_f64<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }
    match Repr::deserialize(d)? {
        Repr::Num(v) => Ok(v),
        Repr::Str(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => other.parse().map_err(serde::de::Error::custom),
        },
    }
}
