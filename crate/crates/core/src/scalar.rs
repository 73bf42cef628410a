//! Scalar types used for filtration values, shifts and diagram endpoints.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{Num, ToPrimitive, Zero};

/// Ordered number type carrying filtration values.
///
/// Implemented for `f32`, `f64` and the exact rationals `Rational64` and
/// `BigRational`. Values must be totally ordered in practice: parsers reject
/// NaN, so [`Scalar::total_cmp`] never sees one.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// Parses a decimal literal such as `-1.25`, `3` or `2e-1`.
    fn parse_decimal(text: &str) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn from_i64(value: i64) -> Self;

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn half(&self) -> Self {
        self.clone() / (Self::one() + Self::one())
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self < other {
            other.clone() - self.clone()
        } else {
            self.clone() - other.clone()
        }
    }

    fn max_of(&self, other: &Self) -> Self {
        if self.total_cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(&self, other: &Self) -> Self {
        if self.total_cmp(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn parse_decimal(text: &str) -> Option<Self> {
                let v: $t = text.trim().parse().ok()?;
                v.is_finite().then_some(v)
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn from_i64(value: i64) -> Self {
                value as $t
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// Splits a decimal literal into an exact numerator and a power-of-ten
/// denominator exponent.
fn parse_decimal_parts(text: &str) -> Option<(BigInt, i64)> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numerator: BigInt = all_digits.parse().ok()?;
    if negative {
        numerator = -numerator;
    }
    Some((numerator, exponent - frac_part.len() as i64))
}

fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), exp as usize)
}

fn decimal_to_big_rational(text: &str) -> Option<BigRational> {
    if let Some((num, den)) = text.trim().split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (numerator, exp10) = parse_decimal_parts(text)?;
    if exp10.unsigned_abs() > 4096 {
        return None;
    }
    Some(if exp10 >= 0 {
        BigRational::from_integer(numerator * pow10(exp10 as u32))
    } else {
        BigRational::new(numerator, pow10((-exp10) as u32))
    })
}

impl Scalar for BigRational {
    fn parse_decimal(text: &str) -> Option<Self> {
        decimal_to_big_rational(text)
    }
    fn to_f64(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
}

impl Scalar for Rational64 {
    fn parse_decimal(text: &str) -> Option<Self> {
        let big = decimal_to_big_rational(text)?;
        Some(Ratio::new(big.numer().to_i64()?, big.denom().to_i64()?))
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(value)
    }
}

/// A value extended by `+∞`, used for bar deaths and distances.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.total_cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.to_f64(),
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl<T: Scalar> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

impl<T: Display> Display for Extended<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

pub(crate) fn sort_scalars<T: Scalar>(values: &mut Vec<T>) {
    values.sort_by(|a, b| a.total_cmp(b));
    values.dedup_by(|a, b| a.total_cmp(b) == Ordering::Equal);
}

/// Index of the largest grid value `<= t`, or `None` when `t` precedes the grid.
pub(crate) fn floor_index<T: Scalar>(grid: &[T], t: &T) -> Option<usize> {
    let count = grid.partition_point(|g| g.total_cmp(t) != Ordering::Greater);
    count.checked_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact_for_rationals() {
        assert_eq!(Rational64::parse_decimal("0.5"), Some(Ratio::new(1, 2)));
        assert_eq!(Rational64::parse_decimal("-1.25"), Some(Ratio::new(-5, 4)));
        assert_eq!(Rational64::parse_decimal("2e-1"), Some(Ratio::new(1, 5)));
        assert_eq!(Rational64::parse_decimal("3/6"), Some(Ratio::new(1, 2)));
        assert_eq!(Rational64::parse_decimal("abc"), None);
        assert_eq!(f64::parse_decimal("nan"), None);
        assert_eq!(f64::parse_decimal("1.5"), Some(1.5));
    }

    #[test]
    fn floor_index_matches_closed_convention() {
        let grid = [0.0, 1.0, 2.0];
        assert_eq!(floor_index(&grid, &-0.5), None);
        assert_eq!(floor_index(&grid, &0.0), Some(0));
        assert_eq!(floor_index(&grid, &1.5), Some(1));
        assert_eq!(floor_index(&grid, &7.0), Some(2));
    }

    #[test]
    fn extended_ordering_puts_infinity_last() {
        let a: Extended<f64> = Extended::Finite(3.0);
        assert!(a < Extended::Infinite);
        assert_eq!(Extended::<f64>::Infinite.to_string(), "inf");
    }
}
