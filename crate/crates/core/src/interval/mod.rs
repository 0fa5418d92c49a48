//! Closed real intervals with outward rounding.
//!
//! The operator overloads never fail: a division by an interval containing
//! zero, or an overflowing endpoint, saturates to infinite bounds so that hot
//! loops stay branch-light. Code that must not see infinite bounds goes through
//! [`arith`] / [`Interval::checked_div`], or checks [`Interval::is_finite`] on
//! the final result.

mod elementary;
mod jet;
mod quad;
mod taylor;
pub(crate) mod round;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use round::*;

pub use elementary::{elementary, pi_enclosure, Elementary};
pub use jet::Jet2;
pub use quad::{
    integrate_range, integrate_taylor_many, integrate_verified, integrate_verified_many, subdivide, QuadOptions, QuadResult,
};
pub use taylor::Taylor;

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = Error;
    fn try_from((lo, hi): (f64, f64)) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(x: Interval) -> Self {
        (x.lo, x.hi)
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    /// Validated constructor: finite endpoints with `lo <= hi`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    #[inline]
    pub(crate) const fn raw(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    #[inline]
    pub fn point(x: f64) -> Self {
        debug_assert!(!x.is_nan());
        Interval { lo: x, hi: x }
    }

    /// Smallest interval containing both floats, in either order.
    #[inline]
    pub fn spanning(a: f64, b: f64) -> Self {
        Interval { lo: a.min(b), hi: a.max(b) }
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on `hi - lo`.
    #[inline]
    pub fn width(self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// max |x| over the interval.
    #[inline]
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// min |x| over the interval.
    #[inline]
    pub fn mig(self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    #[inline]
    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    #[inline]
    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    #[inline]
    pub fn encloses(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `other` lies in the interior of `self`.
    #[inline]
    pub fn interior_contains(self, other: Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    #[inline]
    pub fn overlaps(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    #[inline]
    pub fn hull(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    #[inline]
    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Certainly `< other`.
    #[inline]
    pub fn lt(self, other: Interval) -> bool {
        self.hi < other.lo
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.hi < 0.0
    }

    /// Expand by `r` on both sides (outward rounded).
    #[inline]
    pub fn inflate(self, r: f64) -> Interval {
        Interval { lo: sub_dn(self.lo, r), hi: add_up(self.hi, r) }
    }

    #[inline]
    pub fn sqr(self) -> Interval {
        let (a, b) = (self.lo, self.hi);
        if a >= 0.0 {
            Interval { lo: mul_dn(a, a), hi: mul_up(b, b) }
        } else if b <= 0.0 {
            Interval { lo: mul_dn(b, b), hi: mul_up(a, a) }
        } else {
            let m = a.abs().max(b);
            Interval { lo: 0.0, hi: mul_up(m, m) }
        }
    }

    pub fn powi(self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => self,
            _ if n % 2 == 0 => self.powi(n / 2).sqr(),
            _ => {
                // odd powers are monotone
                let lo = pow_odd(self.lo, n, false);
                let hi = pow_odd(self.hi, n, true);
                Interval { lo, hi }
            }
        }
    }

    #[inline]
    pub fn recip(self) -> Interval {
        Interval::ONE / self
    }

    pub fn checked_div(self, y: Interval) -> Result<Interval> {
        arith(self, y, ArithKind::Div)
    }

    #[inline]
    pub fn abs(self) -> Interval {
        Interval { lo: self.mig(), hi: self.mag() }
    }

    #[inline]
    pub fn max(self, other: Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    #[inline]
    pub fn min(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    /// Fails if an endpoint is infinite.
    pub fn finite(self) -> Result<Interval> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Overflow)
        }
    }

    /// Symmetric interval `[-r, r]`.
    #[inline]
    pub fn symmetric(r: f64) -> Interval {
        Interval { lo: -r, hi: r }
    }
}

fn pow_odd(x: f64, n: u32, up: bool) -> f64 {
    // x^n with directed rounding, via repeated multiplication in the direction
    // that keeps the magnitude bound valid for the given sign.
    let neg = x < 0.0;
    let a = x.abs();
    // bound |x|^n from below (for the lower endpoint of positive x, or upper of negative x)
    let want_big = up != neg;
    let mut r = 1.0f64;
    for _ in 0..n {
        r = if want_big { mul_up(r, a) } else { mul_dn(r, a) };
    }
    if neg {
        -r
    } else {
        r
    }
}

pub fn arith(x: Interval, y: Interval, kind: ArithKind) -> Result<Interval> {
    let r = match kind {
        ArithKind::Add => x + y,
        ArithKind::Sub => x - y,
        ArithKind::Mul => x * y,
        ArithKind::Div => {
            if y.contains_zero() {
                return Err(Error::DivisionByZeroInterval);
            }
            x / y
        }
    };
    r.finite()
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, y: Interval) -> Interval {
        Interval { lo: add_dn(self.lo, y.lo), hi: add_up(self.hi, y.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, y: Interval) -> Interval {
        Interval { lo: sub_dn(self.lo, y.hi), hi: sub_up(self.hi, y.lo) }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, y: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, y.lo, y.hi);
        if a >= 0.0 {
            if c >= 0.0 {
                Interval { lo: mul_dn(a, c), hi: mul_up(b, d) }
            } else if d <= 0.0 {
                Interval { lo: mul_dn(b, c), hi: mul_up(a, d) }
            } else {
                Interval { lo: mul_dn(b, c), hi: mul_up(b, d) }
            }
        } else if b <= 0.0 {
            if c >= 0.0 {
                Interval { lo: mul_dn(a, d), hi: mul_up(b, c) }
            } else if d <= 0.0 {
                Interval { lo: mul_dn(b, d), hi: mul_up(a, c) }
            } else {
                Interval { lo: mul_dn(a, d), hi: mul_up(a, c) }
            }
        } else if c >= 0.0 {
            Interval { lo: mul_dn(a, d), hi: mul_up(b, d) }
        } else if d <= 0.0 {
            Interval { lo: mul_dn(b, c), hi: mul_up(a, c) }
        } else {
            Interval {
                lo: mul_dn(a, d).min(mul_dn(b, c)),
                hi: mul_up(a, c).max(mul_up(b, d)),
            }
        }
    }
}

impl Div for Interval {
    type Output = Interval;
    #[inline]
    fn div(self, y: Interval) -> Interval {
        if y.contains_zero() {
            return Interval::ENTIRE;
        }
        let (a, b, c, d) = (self.lo, self.hi, y.lo, y.hi);
        if c > 0.0 {
            if a >= 0.0 {
                Interval { lo: div_dn(a, d), hi: div_up(b, c) }
            } else if b <= 0.0 {
                Interval { lo: div_dn(a, c), hi: div_up(b, d) }
            } else {
                Interval { lo: div_dn(a, c), hi: div_up(b, c) }
            }
        } else if a >= 0.0 {
            Interval { lo: div_dn(b, d), hi: div_up(a, c) }
        } else if b <= 0.0 {
            Interval { lo: div_dn(b, c), hi: div_up(a, d) }
        } else {
            Interval { lo: div_dn(b, d), hi: div_up(a, d) }
        }
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            #[inline]
            fn $f(self, y: f64) -> Interval { $tr::$f(self, Interval::point(y)) }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            #[inline]
            fn $f(self, y: Interval) -> Interval { $tr::$f(Interval::point(self), y) }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign for Interval {
    #[inline]
    fn add_assign(&mut self, y: Interval) {
        *self = *self + y;
    }
}

impl SubAssign for Interval {
    #[inline]
    fn sub_assign(&mut self, y: Interval) {
        *self = *self - y;
    }
}

impl MulAssign for Interval {
    #[inline]
    fn mul_assign(&mut self, y: Interval) {
        *self = *self * y;
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

/// Interval with endpoints given as the two closest floats around a decimal
/// constant known to better than half an ulp.
pub(crate) const fn around(c: f64) -> Interval {
    Interval::raw(c.next_down(), c.next_up())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 4.0), iv(4.0, 6.0));
        assert_eq!(iv(-1.0, 2.0) * iv(3.0, 4.0), iv(-4.0, 8.0));
        assert_eq!(
            arith(iv(1.0, 1.0), iv(0.0, 1.0), ArithKind::Div),
            Err(Error::DivisionByZeroInterval)
        );
    }

    #[test]
    fn invalid_construction() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn overflow_is_an_error_in_checked_api() {
        let big = Interval::point(f64::MAX);
        assert_eq!(arith(big, big, ArithKind::Mul), Err(Error::Overflow));
    }

    #[test]
    fn odd_and_even_powers() {
        let x = iv(-2.0, 3.0);
        assert_eq!(x.powi(2), iv(0.0, 9.0));
        assert_eq!(x.powi(3), iv(-8.0, 27.0));
        assert_eq!(iv(-3.0, -2.0).powi(4), iv(16.0, 81.0));
        let t = Interval::point(0.1).powi(3);
        assert!(t.contains(0.1f64 * 0.1 * 0.1) && t.width() < 1e-17);
    }

    #[test]
    fn serde_roundtrip_is_exact() {
        let x = Interval::point(0.1) / Interval::point(3.0);
        let s = serde_json::to_string(&x).unwrap();
        let y: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<Interval>("[2.0, 1.0]").is_err());
    }
}
