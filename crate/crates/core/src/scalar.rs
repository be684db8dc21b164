//! Number abstraction shared by every engine in the crate.
//!
//! Two arithmetic modes exist. [`Rational`] is exact and is what the
//! verifiers use: closed-form identities hold with zero error and ties are
//! resolved exactly. `f64` is the fast mode used for Monte Carlo work; its
//! comparisons treat values within [`FLOAT_TOLERANCE`] as equal.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

/// Comparison tolerance of the float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Arithmetic mode selector, mostly for the CLI and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Hashable canonical form, used to memoize on value vectors.
    type Key: Clone + Debug + Eq + Hash + Ord + Send + Sync;

    const MODE: Mode;

    fn from_int(value: i64) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Converts a float. Rationals take the exact binary expansion.
    fn from_f64(value: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn key(&self) -> Self::Key;

    /// Total order with the mode's tolerance applied.
    fn tol_cmp(&self, other: &Self) -> Ordering;

    fn is_finite(&self) -> bool;

    /// Parses `"7"`, `"-0.25"`, `"1e-3"` or `"3/4"`.
    fn parse(text: &str) -> Result<Self>;

    /// Renders the value; rationals use `"num/den"` unless integral.
    fn render(&self) -> String;

    fn approx_eq(&self, other: &Self) -> bool {
        self.tol_cmp(other) == Ordering::Equal
    }

    fn tol_ge(&self, other: &Self) -> bool {
        self.tol_cmp(other) != Ordering::Less
    }

    fn tol_gt(&self, other: &Self) -> bool {
        self.tol_cmp(other) == Ordering::Greater
    }

    fn is_negative_tol(&self) -> bool {
        self.tol_cmp(&Self::zero()) == Ordering::Less
    }

    fn is_positive_tol(&self) -> bool {
        self.tol_cmp(&Self::zero()) == Ordering::Greater
    }

    fn max_of(self, other: Self) -> Self {
        if other.tol_gt(&self) {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other.tol_cmp(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// `max(self, 0)`.
    fn positive_part(&self) -> Self {
        if self.is_positive_tol() {
            self.clone()
        } else {
            Self::zero()
        }
    }
}

impl Scalar for Rational {
    type Key = Rational;

    const MODE: Mode = Mode::Exact;

    fn from_int(value: i64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_f64(value: f64) -> Option<Self> {
        Rational::from_float(value)
    }

    fn to_f64(&self) -> f64 {
        // BigRational::to_f64 handles huge numerators/denominators gracefully.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn key(&self) -> Self::Key {
        self.clone()
    }

    fn tol_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn parse(text: &str) -> Result<Self> {
        parse_exact(text)
    }

    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn positive_part(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            Rational::zero()
        }
    }
}

impl Scalar for f64 {
    type Key = u64;

    const MODE: Mode = Mode::Float;

    fn from_int(value: i64) -> Self {
        value as f64
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn from_f64(value: f64) -> Option<Self> {
        value.is_finite().then_some(value)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn key(&self) -> Self::Key {
        // -0.0 and 0.0 must share a key.
        if *self == 0.0 {
            0
        } else {
            self.to_bits()
        }
    }

    fn tol_cmp(&self, other: &Self) -> Ordering {
        if (self - other).abs() <= FLOAT_TOLERANCE {
            Ordering::Equal
        } else if self < other {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num: f64 = parse_float(num)?;
            let den: f64 = parse_float(den)?;
            if den == 0.0 {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            return Ok(num / den);
        }
        parse_float(text)
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

fn parse_float(text: &str) -> Result<f64> {
    let value: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a number: {text:?}")))?;
    if !value.is_finite() {
        return Err(Error::Parse(format!("not finite: {text:?}")));
    }
    Ok(value)
}

/// Exact decimal / fraction parser. `"0.1"` is exactly one tenth.
fn parse_exact(text: &str) -> Result<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_exact(num)?;
        let den = parse_exact(den)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(num / den);
    }
    let bad = || Error::Parse(format!("not a number: {text:?}"));
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| bad())?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_parse_forms() {
        assert_eq!(Rational::parse("0.1").unwrap(), Rational::from_ratio(1, 10));
        assert_eq!(Rational::parse("3/4").unwrap(), Rational::from_ratio(3, 4));
        assert_eq!(Rational::parse("-2").unwrap(), Rational::from_int(-2));
        assert_eq!(Rational::parse("1e-3").unwrap(), Rational::from_ratio(1, 1000));
        assert_eq!(Rational::parse("0.5/2").unwrap(), Rational::from_ratio(1, 4));
        assert!(Rational::parse("abc").is_err());
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse(".").is_err());
    }

    #[test]
    fn render_round_trips() {
        for text in ["7", "-3/8", "0", "22/7"] {
            let v = Rational::parse(text).unwrap();
            assert_eq!(v.render(), text);
        }
        assert_eq!(f64::parse("3/4").unwrap(), 0.75);
    }

    #[test]
    fn float_tolerance_ties() {
        assert!(1.0f64.approx_eq(&(1.0 + 1e-12)));
        assert!(!1.0f64.approx_eq(&1.001));
        assert_eq!(0.0f64.key(), (-0.0f64).key());
    }
}
