//! Closed intervals with exact rational endpoints and outward rounding.
//!
//! Rational operations are exact; only transcendental functions (here just
//! the natural logarithm) introduce error, and they return an enclosure that
//! is guaranteed to contain the true value. Endpoints are snapped outward to
//! a decimal grid so they stay small.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Integer;
use serde::Serialize;

use crate::error::Error;
use crate::rational::{ExactQ, Rounding};

/// Significant digits carried by transcendental enclosures.
pub const DEFAULT_DIGITS: u32 = 50;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: ExactQ,
    pub hi: ExactQ,
}

impl Interval {
    pub fn new(lo: ExactQ, hi: ExactQ) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::usage(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(v: ExactQ) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> ExactQ {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &ExactQ) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Exact product with a nonnegative scalar.
    pub fn scale(&self, c: &ExactQ) -> Interval {
        assert!(!c.is_negative(), "scale factor must be nonnegative");
        Interval { lo: &self.lo * c, hi: &self.hi * c }
    }

    /// Widens outward onto the grid `10^-places`.
    pub fn outward(&self, places: u32) -> Interval {
        Interval {
            lo: self.lo.round_to_places(places, Rounding::Down),
            hi: self.hi.round_to_places(places, Rounding::Up),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_significant(12), self.hi.to_significant(12))
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }
}

/// `2·atanh(y)` for `0 ≤ y ≤ 1/3`, enclosed to within `10^-places`.
///
/// The series `Σ y^{2j+1}/(2j+1)` has positive terms, and the tail after
/// the last kept term is bounded by `y^{2J+3} / ((2J+3)(1-y²))`.
fn twice_atanh(y: &ExactQ, places: u32) -> Interval {
    let y2 = y * y;
    let tolerance = ExactQ::new(1, Integer::from(Integer::u_pow_u(10, places + 2))).expect("nonzero");
    let one_minus = ExactQ::one() - &y2;
    let mut power = y.clone();
    let mut sum = ExactQ::zero();
    let mut j: u32 = 0;
    loop {
        sum += &power / &ExactQ::from(2 * j + 1);
        power = &power * &y2;
        j += 1;
        let tail = &power / &(ExactQ::from(2 * j + 1) * &one_minus);
        if tail <= tolerance || power.is_zero() {
            let two = ExactQ::from_int(2);
            let lo = &sum * &two;
            let hi = (&sum + &tail) * two;
            return Interval { lo, hi };
        }
    }
}

/// Enclosure of `ln 2`.
pub fn ln2(places: u32) -> Interval {
    twice_atanh(&ExactQ::ratio(1, 3), places + 2).outward(places + 2)
}

/// Enclosure of `ln x` for rational `x > 0`, of width about `10^-places`
/// and rounded outward onto that grid.
pub fn ln(x: &ExactQ, places: u32) -> Result<Interval, Error> {
    if x.is_negative() || x.is_zero() {
        return Err(Error::usage(format!("logarithm of nonpositive {x}")));
    }
    // x = 2^m · r with 1 ≤ r < 2
    let mut m: i64 = x.numer().significant_bits() as i64 - x.denom().significant_bits() as i64;
    let two = ExactQ::from_int(2);
    let shift = |m: i64| -> ExactQ {
        if m >= 0 {
            x / &two.pow(m as u32)
        } else {
            x * &two.pow((-m) as u32)
        }
    };
    let mut r = shift(m);
    while r < ExactQ::one() {
        m -= 1;
        r = shift(m);
    }
    while r >= two {
        m += 1;
        r = shift(m);
    }
    let y = (&r - &ExactQ::one()) / (&r + &ExactQ::one());
    let guard = places + 4;
    let log_r = twice_atanh(&y, guard);
    let log2 = ln2(guard);
    let scaled = if m >= 0 {
        log2.scale(&ExactQ::from_int(m))
    } else {
        -&log2.scale(&ExactQ::from_int(-m))
    };
    Ok((&log_r + &scaled).outward(places))
}
