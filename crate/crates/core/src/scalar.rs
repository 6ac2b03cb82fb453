//! Exact rational scalars and their textual encodings.
//!
//! Every value, resource, multiplier and bound handled by the solver is a
//! reduced arbitrary-precision rational. Text input accepts integers,
//! `num/den` fractions and finite decimals (with optional exponent); text
//! output always uses the `num/den` form so that round-trips are exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};
use thiserror::Error;

/// Reduced arbitrary-precision rational (`gcd(|num|, den) = 1`, `den > 0`).
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("exponent out of range in `{0}`")]
    ExponentRange(String),
}

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

/// Largest integer not above `q`.
pub fn floor(q: &Scalar) -> Scalar {
    q.floor()
}

pub fn is_integral(q: &Scalar) -> bool {
    q.denom().is_one()
}

const MAX_EXPONENT: i64 = 4096;

fn parse_digits(s: &str, whole: &str) -> Result<BigInt, ParseScalarError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseScalarError::Invalid(whole.to_string()));
    }
    BigInt::from_str(s).map_err(|_| ParseScalarError::Invalid(whole.to_string()))
}

fn parse_signed_int(s: &str, whole: &str) -> Result<BigInt, ParseScalarError> {
    let (neg, digits) = split_sign(s);
    let v = parse_digits(digits, whole)?;
    Ok(if neg { -v } else { v })
}

fn split_sign(s: &str) -> (bool, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = s.strip_prefix('+') {
        (false, rest)
    } else {
        (false, s)
    }
}

fn parse_decimal(s: &str, whole: &str) -> Result<Scalar, ParseScalarError> {
    let (neg, body) = split_sign(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_text = &body[pos + 1..];
            let exp = parse_signed_int(exp_text, whole)?
                .to_i64()
                .filter(|e| e.abs() <= MAX_EXPONENT)
                .ok_or_else(|| ParseScalarError::ExponentRange(whole.to_string()))?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(ParseScalarError::Invalid(whole.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = parse_digits(&digits, whole)?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        Scalar::from_integer(num * pow)
    } else {
        Scalar::new(num, pow)
    })
}

/// Parses an integer, a `num/den` fraction, or a finite decimal string.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseScalarError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseScalarError::Empty);
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_signed_int(n.trim(), s)?;
        let den = parse_signed_int(d.trim(), s)?;
        if den.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(s.to_string()));
        }
        return Ok(Scalar::new(num, den));
    }
    parse_decimal(s, s)
}

/// Canonical `num/den` text, e.g. `643/19` or `33/1`.
pub fn format_scalar(q: &Scalar) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Decimal rendering: exact when the expansion terminates, otherwise rounded
/// to `max_frac` fractional digits.
pub fn to_decimal_string(q: &Scalar, max_frac: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let (int_part, mut rem) = a.numer().div_rem(a.denom());
    let den = a.denom().clone();
    let mut frac = String::new();
    let ten = BigInt::from(10);
    while !rem.is_zero() && frac.len() < max_frac {
        rem *= &ten;
        let (d, r) = rem.div_rem(&den);
        frac.push_str(&d.to_string());
        rem = r;
    }
    let mut int_part = int_part;
    if !rem.is_zero() {
        // round half up on the remaining tail
        let twice = &rem * BigInt::from(2);
        if twice >= den {
            let mut digits: Vec<u8> = frac.bytes().map(|b| b - b'0').collect();
            let mut carry = true;
            for d in digits.iter_mut().rev() {
                if !carry {
                    break;
                }
                if *d == 9 {
                    *d = 0;
                } else {
                    *d += 1;
                    carry = false;
                }
            }
            if carry {
                int_part += 1;
            }
            frac = digits.iter().map(|d| char::from(b'0' + d)).collect();
        }
        while frac.ends_with('0') {
            frac.pop();
        }
    }
    let sign = if neg && (!int_part.is_zero() || !frac.is_empty()) {
        "-"
    } else {
        ""
    };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Scalarisation weight of the aggregated value `value + δ·resource`.
///
/// `Infinite` is a sentinel meaning "maximise resource first", it never takes
/// part in arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Multiplier {
    Finite(Scalar),
    Infinite,
}

impl Multiplier {
    pub fn zero() -> Self {
        Multiplier::Finite(Scalar::zero())
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Multiplier::Finite(d) => Some(d),
            Multiplier::Infinite => None,
        }
    }

    /// `value + δ·resource`; `None` for the infinite sentinel.
    pub fn aggregate(&self, value: &Scalar, resource: &Scalar) -> Option<Scalar> {
        self.finite().map(|d| value + d * resource)
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplier::Finite(d) => write!(f, "{d}"),
            Multiplier::Infinite => f.write_str("+inf"),
        }
    }
}

struct ScalarVisitor;

impl Visitor<'_> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer, a \"num/den\" string or a decimal")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
        Ok(Scalar::from_integer(BigInt::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
        if !v.is_finite() {
            return Err(E::custom("non-finite number"));
        }
        // shortest round-trip representation, then exact decimal conversion
        parse_scalar(&format!("{v:?}")).map_err(E::custom)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
        parse_scalar(v).map_err(E::custom)
    }
}

/// Serde adapter for [`Scalar`] fields (`#[serde(with = "scalar::serde_scalar")]`).
pub mod serde_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        d.deserialize_any(ScalarVisitor)
    }
}

/// Serde adapter for optional bounds; `null`, a missing field, or the strings
/// `"inf"`/`"-inf"` all mean "unbounded".
pub mod serde_bound {
    use super::*;

    struct BoundVisitor;

    impl<'de> Visitor<'de> for BoundVisitor {
        type Value = Option<Scalar>;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a number, a \"num/den\" string, \"inf\" or null")
        }

        fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
            Ok(None)
        }

        fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
            Ok(None)
        }

        fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
            d.deserialize_any(BoundVisitor)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
            ScalarVisitor.visit_i64(v).map(Some)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
            ScalarVisitor.visit_u64(v).map(Some)
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
            ScalarVisitor.visit_f64(v).map(Some)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
            match v.trim() {
                "inf" | "+inf" | "-inf" | "infinity" | "+infinity" | "-infinity" => Ok(None),
                other => ScalarVisitor.visit_str(other).map(Some),
            }
        }
    }

    pub fn serialize<S: Serializer>(q: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&format_scalar(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Scalar>, D::Error> {
        d.deserialize_option(BoundVisitor)
    }
}
