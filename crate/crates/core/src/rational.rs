//! Exact rationals for ε bookkeeping.
//!
//! Every threshold is carried as a `p/q` pair; floating point never enters a
//! pass/fail decision.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational with `i64` numerator and denominator.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("`{0}` is not a rational of the form p/q")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("epsilon {0} is not in the open interval (0,1)")]
    OutOfRange(String),
}

/// Parse a strict `p/q` string. Decimals and bare integers are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, RationalError> {
    let malformed = || RationalError::Malformed(text.to_string());
    let (p, q) = text.trim().split_once('/').ok_or_else(malformed)?;
    let p: i64 = p.trim().parse().map_err(|_| malformed())?;
    let q: i64 = q.trim().parse().map_err(|_| malformed())?;
    if q == 0 {
        return Err(RationalError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(p, q))
}

/// Parse a `p/q` string and require it to lie in `(0,1)`.
pub fn parse_epsilon(text: &str) -> Result<Rational, RationalError> {
    let eps = parse_rational(text)?;
    check_epsilon(eps)?;
    Ok(eps)
}

pub fn check_epsilon(eps: Rational) -> Result<(), RationalError> {
    if eps <= Rational::from_integer(0) || eps >= Rational::from_integer(1) {
        return Err(RationalError::OutOfRange(format_rational(eps)));
    }
    Ok(())
}

/// Always renders with a slash, `3/10`, `0/1`, `2/1`.
pub fn format_rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde adapter that stores a [`Rational`] as its `p/q` string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        format_rational(*r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
