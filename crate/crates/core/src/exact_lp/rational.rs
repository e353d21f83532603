//! Helpers around [`Rational`], the exact scalar used everywhere in the crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// `num / den` as a [`Rational`]. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `[q]_+`, the positive part.
pub fn positive_part(q: &Rational) -> Rational {
    if q.is_positive() {
        q.clone()
    } else {
        Rational::zero()
    }
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Approximate value, for human-facing output only.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Snap a float to the grid `k / denominator` (round half away from zero).
pub fn snap_f64(value: f64, denominator: i64) -> Rational {
    let scaled = (value * denominator as f64).round();
    Rational::new(BigInt::from(scaled as i64), BigInt::from(denominator))
}

/// Error returned by [`parse_rational`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parse `a/b`, a plain integer `a`, or a finite decimal such as `-0.125`.
/// Decimals are converted exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{}{}", whole_digits, frac);
        let mut num: BigInt = digits.parse().map_err(|_| err())?;
        if negative {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(Rational::new(num, den));
    }
    let num: BigInt = text.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(num))
}

/// Exact `num/den` rendering (integers keep the `/1`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Display adapter producing [`format_rational`] output.
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("2/-4").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn format_keeps_denominator() {
        assert_eq!(format_rational(&int(2)), "2/1");
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(Exact(&rat(1, 3)).to_string(), "1/3");
    }

    #[test]
    fn lcm_and_snap() {
        let v = [rat(1, 4), rat(1, 6), int(3)];
        assert_eq!(lcm_of_denominators(&v), BigInt::from(12));
        assert_eq!(snap_f64(0.3333333, 1000), rat(333, 1000));
        assert_eq!(snap_f64(-0.5, 2), int(-1) / int(2));
    }
}
