//! Exact values in `[0, ∞]`.
//!
//! Distances, metric entries and ε parameters are all exact rationals, with
//! `∞` as a first-class value. Addition saturates at `∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A nonnegative exact rational or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    Fin(Rational64),
    Inf,
}

impl Ext {
    pub const ZERO: Ext = Ext::Fin(Rational64::new_raw(0, 1));

    pub fn int(n: i64) -> Ext {
        Ext::Fin(Rational64::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Ext {
        Ext::Fin(Rational64::new(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Fin(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Fin(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<Rational64> {
        match self {
            Ext::Fin(r) => Some(*r),
            Ext::Inf => None,
        }
    }

    /// Smallest integer `≥ self`; `∞` stays `∞`.
    pub fn ceil(&self) -> Ext {
        match self {
            Ext::Fin(r) => Ext::Fin(r.ceil()),
            Ext::Inf => Ext::Inf,
        }
    }
}

impl Default for Ext {
    fn default() -> Self {
        Ext::ZERO
    }
}

impl From<Rational64> for Ext {
    fn from(r: Rational64) -> Self {
        Ext::Fin(r)
    }
}

impl From<i64> for Ext {
    fn from(n: i64) -> Self {
        Ext::int(n)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => a.cmp(b),
            (Ext::Fin(_), Ext::Inf) => Ordering::Less,
            (Ext::Inf, Ext::Fin(_)) => Ordering::Greater,
            (Ext::Inf, Ext::Inf) => Ordering::Equal,
        }
    }
}

impl Add for Ext {
    type Output = Ext;

    fn add(self, rhs: Ext) -> Ext {
        match (self, rhs) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Inf => write!(f, "inf"),
            Ext::Fin(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Ext::Fin(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// Parses `"inf"`, integers, `"p/q"` and terminating decimals such as `"0.25"`.
/// Negative values are rejected.
impl FromStr for Ext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not an exact nonnegative value: {s:?}"));
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Ext::Inf);
        }
        let r = parse_rational(s).ok_or_else(bad)?;
        if r.is_negative() {
            return Err(bad());
        }
        Ok(Ext::Fin(r))
    }
}

/// Parses a signed exact rational from `"p"`, `"p/q"` or a decimal string.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational64::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let frac_part: i64 = frac.parse().ok()?;
        let magnitude = int_part.abs().checked_mul(scale)?.checked_add(frac_part)?;
        let num = if neg { -magnitude } else { magnitude };
        return Some(Rational64::new(num, scale));
    }
    s.parse::<i64>().ok().map(Rational64::from_integer)
}

/// Formats a signed rational the way [`parse_rational`] reads it back.
pub fn format_rational(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Ext::Fin(r) if *r.denom() == 1 => serializer.serialize_i64(*r.numer()),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(n) if n >= 0 => Ok(Ext::int(n)),
            Raw::Int(n) => Err(serde::de::Error::custom(format!("negative value {n}"))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Serde adapter for signed rationals stored as integers or strings.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        if *r.denom() == 1 {
            s.serialize_i64(*r.numer())
        } else {
            s.serialize_str(&format_rational(r))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Rational64::from_integer(n)),
            Raw::Str(s) => parse_rational(&s)
                .ok_or_else(|| serde::de::Error::custom(format!("not an exact rational: {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(Ext::int(3) + Ext::Inf, Ext::Inf);
        assert_eq!(Ext::Inf + Ext::ZERO, Ext::Inf);
        assert_eq!(Ext::int(1) + Ext::ratio(1, 2), Ext::ratio(3, 2));
    }

    #[test]
    fn ordering_places_infinity_last() {
        let mut v = vec![Ext::Inf, Ext::int(2), Ext::ZERO, Ext::ratio(1, 3)];
        v.sort();
        assert_eq!(v, vec![Ext::ZERO, Ext::ratio(1, 3), Ext::int(2), Ext::Inf]);
    }

    #[test]
    fn parses_exact_forms() {
        assert_eq!("inf".parse::<Ext>().unwrap(), Ext::Inf);
        assert_eq!("0.25".parse::<Ext>().unwrap(), Ext::ratio(1, 4));
        assert_eq!("3/6".parse::<Ext>().unwrap(), Ext::ratio(1, 2));
        assert_eq!("7".parse::<Ext>().unwrap(), Ext::int(7));
        assert!("-1".parse::<Ext>().is_err());
        assert!("abc".parse::<Ext>().is_err());
        assert_eq!(parse_rational("-1.5"), Some(Rational64::new(-3, 2)));
    }

    #[test]
    fn json_round_trip() {
        let vals = vec![Ext::int(2), Ext::ratio(1, 3), Ext::Inf];
        let s = serde_json::to_string(&vals).unwrap();
        assert_eq!(s, r#"[2,"1/3","inf"]"#);
        let back: Vec<Ext> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vals);
    }
}
