//! Exact rational values: parsing from decimal/fraction strings and formatting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exact = BigRational;

pub fn int(v: i64) -> Exact {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Exact {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"-1"`, `"3/2"`, `"-0.25"`, `"1e-3"`-free decimal strings into exact rationals.
pub fn parse_exact(s: &str) -> Result<Exact> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: \"{s}\""));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in \"{s}\"")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let value = BigRational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_exact(x: &Exact) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Exact) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Extreme magnitudes: fall back to a ratio of floats.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Twelve significant digits, the output convention for inexact numbers.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-5..12).contains(&magnitude) {
        let decimals = (11 - magnitude).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s)
    } else {
        format!("{x:.11e}")
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

pub fn sign_of(x: &Exact) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn serialize_exact<S: serde::Serializer>(x: &Exact, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_exact(x))
}

pub(crate) fn serialize_exact_opt<S: serde::Serializer>(
    x: &Option<Exact>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&format_exact(v)),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_forms() {
        assert_eq!(parse_exact("-1").unwrap(), int(-1));
        assert_eq!(parse_exact("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_exact("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_exact(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_exact("+2.").unwrap(), int(2));
        assert_eq!(parse_exact("-6/4").unwrap(), ratio(-3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "-", "1e3", "0x10", "."] {
            assert!(parse_exact(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formats() {
        assert_eq!(format_exact(&ratio(-5, 2)), "-5/2");
        assert_eq!(format_exact(&int(8)), "8");
        assert_eq!(format_float(2.0), "2.0");
        assert_eq!(format_float(0.999664649869534), "0.99966464987");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
    }
}
