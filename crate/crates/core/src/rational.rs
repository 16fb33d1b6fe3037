//! Exact rational helpers shared by every solver.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

use crate::error::ParseRationalError;

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"3.5"`.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = text.trim();
    let bad = || ParseRationalError(trimmed.to_string());
    if trimmed.is_empty() {
        return Err(bad());
    }
    if let Some((numer, denom)) = trimmed.split_once('/') {
        let numer = BigInt::from_str(numer.trim()).map_err(|_| bad())?;
        let denom = BigInt::from_str(denom.trim()).map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((whole, frac)) = trimmed.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole_value = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(whole_digits).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_value = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = Rational::new(whole_value * &scale + frac_value, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(trimmed)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Nearest rational with denominator `2^40`; used only to lift oracle floats.
pub fn from_f64_approx(value: f64) -> Rational {
    let scale = (1u64 << 40) as f64;
    let numer = (value * scale).round();
    Rational::new(BigInt::from(numer as i128), BigInt::from(1u64 << 40))
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn clamp_unit(value: Rational) -> Rational {
    if value.is_negative() {
        zero()
    } else if value > one() {
        one()
    } else {
        value
    }
}

/// Serde adapter storing rationals as canonical strings.
pub mod serde_text {
    use super::{format, parse, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("3.5").unwrap(), ratio(7, 2));
        assert_eq!(parse("-0.25").unwrap(), ratio(-1, 4));
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert!(parse("4/0").is_err());
        assert!(parse("").is_err());
        assert!(parse("x").is_err());
        assert!(parse("1.").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format(&ratio(6, 8)), "3/4");
        assert_eq!(format(&int(-2)), "-2");
        assert_eq!(format(&zero()), "0");
    }
}
