//! Scalar types a set function can take values in.

use std::fmt;

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

use crate::exact::ExactBits;

/// Absolute tolerance for floating-point comparisons.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Minimal arithmetic needed by polymatroid tables and I-measures.
///
/// `is_zero_value` and `is_negative` are exact for exact types; `f64` uses
/// [`FLOAT_TOLERANCE`].
pub trait Value: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn from_int(v: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul_int(&self, k: i64) -> Self;
    fn mul_rational(&self, k: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero_value(&self) -> bool;
    fn is_negative(&self) -> bool;
}

impl Value for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_int(&self, k: i64) -> Self {
        self * k as f64
    }
    fn mul_rational(&self, k: &BigRational) -> Self {
        self * ToPrimitive::to_f64(k).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero_value(&self) -> bool {
        self.abs() <= FLOAT_TOLERANCE
    }
    fn is_negative(&self) -> bool {
        *self < -FLOAT_TOLERANCE
    }
}

impl Value for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_int(&self, k: i64) -> Self {
        self * BigRational::from_integer(BigInt::from(k))
    }
    fn mul_rational(&self, k: &BigRational) -> Self {
        self * k
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Value for ExactBits {
    fn zero() -> Self {
        ExactBits::zero()
    }
    fn from_int(v: i64) -> Self {
        ExactBits::from_rational(<BigRational as Value>::from_int(v))
    }
    fn add(&self, other: &Self) -> Self {
        ExactBits::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        ExactBits::sub(self, other)
    }
    fn mul_int(&self, k: i64) -> Self {
        self.scale(&<BigRational as Value>::from_int(k))
    }
    fn mul_rational(&self, k: &BigRational) -> Self {
        self.scale(k)
    }
    fn to_f64(&self) -> f64 {
        ExactBits::to_f64(self)
    }
    fn is_zero_value(&self) -> bool {
        ExactBits::is_zero(self)
    }
    /// Exact when the value is rational; otherwise decided by the float image.
    fn is_negative(&self) -> bool {
        match self.to_rational() {
            Some(r) => Signed::is_negative(&r),
            None => ExactBits::to_f64(self) < 0.0,
        }
    }
}

/// `num/den` (or an integer) for a rational.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `num/den` or a decimal such as `0.125` / `1e-3` exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let all = all / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}
