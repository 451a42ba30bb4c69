//! Exact rationals.
//!
//! [`ExactQ`] wraps a GMP rational. GMP keeps every value canonical (lowest
//! terms, positive denominator) after each operation, so equality is
//! structural and golden values can be compared directly.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::ops::{DivRounding, Pow};
use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Direction used when a rational is snapped to a coarser grid or rendered
/// with finitely many digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactQ(Rational);

impl ExactQ {
    pub fn zero() -> Self {
        ExactQ(Rational::new())
    }

    pub fn one() -> Self {
        ExactQ::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        ExactQ(Rational::from(v))
    }

    /// `num / den`; fails only when `den == 0`.
    pub fn new(num: impl Into<Integer>, den: impl Into<Integer>) -> Result<Self, Error> {
        let den = den.into();
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactQ(Rational::from((num.into(), den))))
    }

    /// Shorthand for small literals. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        ExactQ::new(num, den).expect("zero denominator")
    }

    pub fn from_integer(v: Integer) -> Self {
        ExactQ(Rational::from(v))
    }

    pub fn from_rational(r: Rational) -> Self {
        ExactQ(r)
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Ordering::Less
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn abs(&self) -> Self {
        ExactQ(self.0.clone().abs())
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactQ(self.0.clone().recip()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        ExactQ(Rational::from((&self.0).pow(exp)))
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Integer part rounded in the given direction.
    pub fn round_to_integer(&self, mode: Rounding) -> Integer {
        let num = self.0.numer().clone();
        let den = self.0.denom().clone();
        match mode {
            Rounding::Down => num.div_floor(den),
            Rounding::Up => num.div_ceil(den),
            Rounding::Nearest => {
                // half away from zero
                let twice = Integer::from(&num * 2);
                let den2 = Integer::from(&den * 2);
                if num.cmp0() == Ordering::Less {
                    (twice - &den).div_ceil(den2)
                } else {
                    (twice + &den).div_floor(den2)
                }
            }
        }
    }

    /// Snap onto the grid `10^-places`, rounding in the given direction.
    /// Used to keep interval endpoints small without losing the direction of
    /// the error.
    pub fn round_to_places(&self, places: u32, mode: Rounding) -> Self {
        let scale = Integer::from(Integer::u_pow_u(10, places));
        let scaled = ExactQ(Rational::from(&self.0 * &scale));
        let k = scaled.round_to_integer(mode);
        ExactQ(Rational::from((k, scale)))
    }

    /// Fixed-point rendering with exactly `places` digits after the point,
    /// rounded to nearest.
    pub fn to_fixed(&self, places: u32) -> String {
        let scale = Integer::from(Integer::u_pow_u(10, places));
        let k = ExactQ(Rational::from(&self.0 * &scale)).round_to_integer(Rounding::Nearest);
        render_scaled(&k, places as usize)
    }

    /// Rendering with `digits` significant digits (rounded to nearest). Plain
    /// positional notation is used unless the magnitude is below `1e-6` or at
    /// least `1e30`, where scientific notation keeps the string short.
    pub fn to_significant(&self, digits: u32) -> String {
        assert!(digits > 0, "need at least one significant digit");
        if self.is_zero() {
            return "0".to_string();
        }
        let exp = self.decimal_exponent();
        if (-6..30).contains(&exp) {
            let places = (digits as i64 - 1 - exp).max(0) as u32;
            return self.to_fixed(places);
        }
        // mantissa in [1, 10)
        let shifted = if exp >= 0 {
            ExactQ(Rational::from(&self.0 / Integer::from(Integer::u_pow_u(10, exp as u32))))
        } else {
            ExactQ(Rational::from(&self.0 * Integer::from(Integer::u_pow_u(10, (-exp) as u32))))
        };
        let mut mantissa = shifted.to_fixed(digits - 1);
        let mut exp = exp;
        // rounding can carry into a new leading digit (9.99.. -> 10.0..)
        let unsigned = mantissa.trim_start_matches('-');
        if unsigned.starts_with("10") {
            exp += 1;
            let shifted = ExactQ(Rational::from(&shifted.0 / 10));
            mantissa = shifted.to_fixed(digits - 1);
        }
        format!("{mantissa}e{exp}")
    }

    /// `e` with `10^e <= |self| < 10^(e+1)`. `self` must be nonzero.
    fn decimal_exponent(&self) -> i64 {
        let a = self.0.clone().abs();
        let num = a.numer();
        let den = a.denom();
        // estimate from bit lengths, then correct
        let est = ((num.significant_bits() as f64 - den.significant_bits() as f64)
            * std::f64::consts::LOG10_2)
            .floor() as i64;
        let mut e = est;
        loop {
            let lower = pow10(e);
            let upper = pow10(e + 1);
            if a < lower {
                e -= 1;
            } else if a >= upper {
                e += 1;
            } else {
                return e;
            }
        }
    }
}

fn pow10(e: i64) -> Rational {
    if e >= 0 {
        Rational::from(Integer::from(Integer::u_pow_u(10, e as u32)))
    } else {
        Rational::from((Integer::from(1), Integer::from(Integer::u_pow_u(10, (-e) as u32))))
    }
}

fn render_scaled(k: &Integer, places: usize) -> String {
    let negative = k.cmp0() == Ordering::Less;
    let digits = k.clone().abs().to_string();
    let body = if places == 0 {
        digits
    } else if digits.len() > places {
        let (int, frac) = digits.split_at(digits.len() - places);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{}", "0".repeat(places - digits.len()), digits)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for ExactQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts `p`, `p/q` and plain decimals such as `0.19076` or `-1.5`; all are
/// converted exactly.
impl FromStr for ExactQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: Integer = num.trim().parse().map_err(|_| bad())?;
            let den: Integer = den.trim().parse().map_err(|_| bad())?;
            return ExactQ::new(num, den).map_err(|_| bad());
        }
        if let Some((int, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let all = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
            let mut num: Integer = all.parse().map_err(|_| bad())?;
            if negative {
                num = -num;
            }
            let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
            return ExactQ::new(num, den);
        }
        let v: Integer = t.parse().map_err(|_| bad())?;
        Ok(ExactQ::from_integer(v))
    }
}

impl Serialize for ExactQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&format_args!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for ExactQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for ExactQ {
    fn from(v: i64) -> Self {
        ExactQ::from_int(v)
    }
}

impl From<u32> for ExactQ {
    fn from(v: u32) -> Self {
        ExactQ(Rational::from(v))
    }
}

impl From<Integer> for ExactQ {
    fn from(v: Integer) -> Self {
        ExactQ::from_integer(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactQ> for &ExactQ {
            type Output = ExactQ;
            fn $method(self, rhs: &ExactQ) -> ExactQ {
                ExactQ(Rational::from((&self.0).$method(&rhs.0)))
            }
        }
        impl $trait<ExactQ> for ExactQ {
            type Output = ExactQ;
            fn $method(self, rhs: ExactQ) -> ExactQ {
                ExactQ(self.0.$method(rhs.0))
            }
        }
        impl $trait<&ExactQ> for ExactQ {
            type Output = ExactQ;
            fn $method(self, rhs: &ExactQ) -> ExactQ {
                ExactQ(self.0.$method(&rhs.0))
            }
        }
        impl $trait<ExactQ> for &ExactQ {
            type Output = ExactQ;
            fn $method(self, rhs: ExactQ) -> ExactQ {
                ExactQ(Rational::from((&self.0).$method(&rhs.0)))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

/// Panics on division by zero, like the primitive types; use
/// [`ExactQ::recip`] for a checked variant.
impl Div<&ExactQ> for &ExactQ {
    type Output = ExactQ;
    fn div(self, rhs: &ExactQ) -> ExactQ {
        assert!(!rhs.is_zero(), "division by zero");
        ExactQ(Rational::from(&self.0 / &rhs.0))
    }
}

impl Div<ExactQ> for ExactQ {
    type Output = ExactQ;
    fn div(self, rhs: ExactQ) -> ExactQ {
        &self / &rhs
    }
}

impl Div<&ExactQ> for ExactQ {
    type Output = ExactQ;
    fn div(self, rhs: &ExactQ) -> ExactQ {
        &self / rhs
    }
}

impl Neg for ExactQ {
    type Output = ExactQ;
    fn neg(self) -> ExactQ {
        ExactQ(-self.0)
    }
}

impl Neg for &ExactQ {
    type Output = ExactQ;
    fn neg(self) -> ExactQ {
        ExactQ(Rational::from(-&self.0))
    }
}

impl AddAssign<&ExactQ> for ExactQ {
    fn add_assign(&mut self, rhs: &ExactQ) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<ExactQ> for ExactQ {
    fn add_assign(&mut self, rhs: ExactQ) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&ExactQ> for ExactQ {
    fn sub_assign(&mut self, rhs: &ExactQ) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactQ> for ExactQ {
    fn mul_assign(&mut self, rhs: &ExactQ) {
        self.0 *= &rhs.0;
    }
}

impl Sum for ExactQ {
    fn sum<I: Iterator<Item = ExactQ>>(iter: I) -> Self {
        iter.fold(ExactQ::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactQ> for ExactQ {
    fn sum<I: Iterator<Item = &'a ExactQ>>(iter: I) -> Self {
        iter.fold(ExactQ::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Product for ExactQ {
    fn product<I: Iterator<Item = ExactQ>>(iter: I) -> Self {
        iter.fold(ExactQ::one(), |acc, x| acc * x)
    }
}
