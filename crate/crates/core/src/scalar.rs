//! Coefficient backends shared by every series, basis and scheme type.
//!
//! All algebra in this crate is written against [`Scalar`]. Exact rationals,
//! `f64`/`f32` and the multivariate polynomials of
//! [`constraints`](crate::constraints) implement it, so the same BCH pipeline
//! produces golden rational constants, fast float error measures, and
//! symbolic order conditions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An exact rational constant together with its nearest `f64`.
///
/// Used wherever a series is scaled by a fixed number (factorials, `1/k` in
/// the logarithm, Hall pivot normalisation) so that float backends never pay
/// for big-integer arithmetic.
#[derive(Clone, PartialEq)]
pub struct Const {
    exact: Rational,
    approx: f64,
}

impl Const {
    pub fn new(exact: Rational) -> Self {
        let approx = ToPrimitive::to_f64(&exact).unwrap_or(f64::NAN);
        Const { exact, approx }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Const::new(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        Const::from_ratio(v, 1)
    }

    pub fn exact(&self) -> &Rational {
        &self.exact
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exact.is_one()
    }

    pub fn recip(&self) -> Const {
        Const::new(self.exact.recip())
    }

    pub fn neg(&self) -> Const {
        Const::new(-self.exact.clone())
    }

    pub fn mul(&self, other: &Const) -> Const {
        Const::new(&self.exact * &other.exact)
    }
}

impl fmt::Debug for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact)
    }
}

/// Coefficient ring for series and Lie coordinates.
///
/// Only ring operations plus scaling by exact rational constants are
/// required; no division by arbitrary elements ever happens in the BCH
/// pipeline.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends whose arithmetic is exact.
    const EXACT: bool;

    fn from_const(c: &Const) -> Self;

    fn scale(&self, c: &Const) -> Self {
        self.mul_ref(&Self::from_const(c))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.clone() + other.clone();
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self = self.clone() - other.clone();
    }

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let p = a.mul_ref(b);
        self.add_assign_ref(&p);
    }

    /// `self += c * x`
    fn add_scaled(&mut self, x: &Self, c: &Const) {
        let p = x.scale(c);
        self.add_assign_ref(&p);
    }

    /// A nonnegative size used for residuals and the 1-norm error measure.
    /// Polynomial backends report their largest coefficient.
    fn magnitude(&self) -> f64;

    /// Value as a float when the backend is numeric.
    fn as_f64(&self) -> Option<f64>;

    /// Exact value when the backend is rational.
    fn as_rational(&self) -> Option<Rational> {
        None
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    #[inline]
    fn from_const(c: &Const) -> Self {
        c.approx
    }
    #[inline]
    fn scale(&self, c: &Const) -> Self {
        self * c.approx
    }
    #[inline]
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    #[inline]
    fn add_assign_ref(&mut self, other: &Self) {
        *self += *other;
    }
    #[inline]
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= *other;
    }
    #[inline]
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    #[inline]
    fn add_scaled(&mut self, x: &Self, c: &Const) {
        *self += x * c.approx;
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn as_f64(&self) -> Option<f64> {
        Some(*self)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_const(c: &Const) -> Self {
        c.approx as f32
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += *other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= *other;
    }
    fn magnitude(&self) -> f64 {
        self.abs() as f64
    }
    fn as_f64(&self) -> Option<f64> {
        Some(*self as f64)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_const(c: &Const) -> Self {
        c.exact.clone()
    }
    fn scale(&self, c: &Const) -> Self {
        self * &c.exact
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn add_scaled(&mut self, x: &Self, c: &Const) {
        *self += x * &c.exact;
    }
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
    fn as_f64(&self) -> Option<f64> {
        ToPrimitive::to_f64(self)
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Parses `"3/7"`, `"-0.125"`, `"1.5e-3"` or an integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in `{s}`")));
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("invalid number `{s}`")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().unwrap()
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact decimal rendering of a rational with `digits` digits after the point
/// (rounded half away from zero).
pub fn format_rational(r: &Rational, digits: usize) -> String {
    let negative = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, digits);
    let scaled = (a * Rational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let mut out = String::new();
    if negative && !scaled.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        let f = frac_part.to_string();
        out.push('.');
        out.push_str(&"0".repeat(digits - f.len()));
        out.push_str(&f);
    }
    out
}

/// Renders a rational as `n` or `n/d`.
pub fn fraction_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("3/7").unwrap(), q(3, 7));
        assert_eq!(parse_rational("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_rational("1.5e-3").unwrap(), q(3, 2000));
        assert_eq!(parse_rational("42").unwrap(), q(42, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn formats_fixed_point() {
        assert_eq!(format_rational(&q(1, 3), 5), "0.33333");
        assert_eq!(format_rational(&q(-2, 3), 3), "-0.667");
        assert_eq!(format_rational(&q(7, 1), 0), "7");
        assert_eq!(fraction_string(&q(6, 4)), "3/2");
    }

    #[test]
    fn const_keeps_both_images() {
        let c = Const::from_ratio(1, 6);
        assert_eq!(c.exact(), &q(1, 6));
        assert!((c.approx() - 1.0 / 6.0).abs() < 1e-17);
        assert_eq!(2.0f64.scale(&c), 2.0 / 6.0);
        assert_eq!(q(3, 1).scale(&c), q(1, 2));
    }
}
