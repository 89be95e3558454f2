//! Exact rational helpers: parsing, `"num/den"` formatting and serde adapters.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SapError};

/// Exact profit value.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `scaled / scale` reduced to lowest terms.
pub fn from_scaled(scaled: i128, scale: i64) -> Rational {
    Rational::new(BigInt::from(scaled), BigInt::from(scale))
}

/// Accepts `"7"`, `"-3"` and `"5/4"`; the denominator must be nonzero.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || SapError::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s)
            .map(Rational::from_integer)
            .map_err(|_| err()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Lossy conversion for display and aggregate statistics only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter writing a rational as its `"num/den"` string and reading
/// either a JSON integer or such a string.
pub mod string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        Entry::deserialize(d)?
            .into_rational()
            .map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a profit matrix: integral entries are written as JSON
/// integers, others as `"num/den"` strings.
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &[Vec<Rational>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Entry>> = m
            .iter()
            .map(|row| row.iter().map(Entry::from_rational).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<Entry>>::deserialize(d)?;
        rows.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| e.into_rational().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Str(String),
}

impl Entry {
    fn from_rational(r: &Rational) -> Self {
        if r.denom().is_one() {
            if let Some(v) = r.numer().to_i64() {
                return Entry::Int(v);
            }
        }
        Entry::Str(format(r))
    }

    fn into_rational(self) -> Result<Rational> {
        match self {
            Entry::Int(v) => Ok(int(v)),
            Entry::Str(s) => parse(&s),
        }
    }
}

pub(crate) fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}
