//! Exact rational numbers and their textual forms.
//!
//! Values are accepted as integers (`"7"`, `-3`), decimals (`"2.5"`, `"1e-3"`)
//! or fractions (`"5/2"`). Decimals are converted exactly, never through `f64`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn parse(text: &str) -> Result<Rational> {
    let err = || Error::ParseNumber(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let numer: BigInt = p.trim().parse().map_err(|_| err())?;
        let denom: BigInt = q.trim().parse().map_err(|_| err())?;
        if denom.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(numer, denom));
    }
    parse_decimal(s).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let scale = exponent - i32::try_from(frac.len()).ok()?;
    let ten = BigInt::from(10);
    let factor = Rational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(if negative { -value } else { value })
}

/// Canonical exact text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format(value: &Rational) -> String {
    value.to_string()
}

/// Lossy conversion for display only.
pub fn approx(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
