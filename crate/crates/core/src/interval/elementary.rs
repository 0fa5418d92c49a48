//! Elementary functions with explicit remainder terms.
//!
//! Nothing here calls the platform `exp`/`ln`/`sin`: every function is an
//! argument reduction (carried out in interval arithmetic, so its rounding is
//! accounted for) followed by a truncated Taylor/atanh series whose tail is
//! bounded analytically.

use std::sync::OnceLock;

use super::round::*;
use super::{around, Interval};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Sqrt,
    Cbrt,
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    PowInt(i32),
    Pow2_3,
    Pow4_3,
    Pow1_3,
    Abs,
}

pub fn elementary(x: Interval, kind: Elementary) -> Result<Interval> {
    let r = match kind {
        Elementary::Sqrt => x.sqrt()?,
        Elementary::Cbrt => x.cbrt(),
        Elementary::Exp => x.exp(),
        Elementary::Log => x.ln()?,
        Elementary::Sin => x.sin(),
        Elementary::Cos => x.cos(),
        Elementary::Tan => x.tan()?,
        Elementary::PowInt(n) => x.pow_int(n)?,
        Elementary::Pow2_3 => x.pow_rational(2, 3)?,
        Elementary::Pow4_3 => x.pow_rational(4, 3)?,
        Elementary::Pow1_3 => x.pow_rational(1, 3)?,
        Elementary::Abs => x.abs(),
    };
    r.finite()
}

const PI: Interval = around(std::f64::consts::PI);
const LN2: Interval = around(std::f64::consts::LN_2);

// ln 2 = L1 + L2 + L3 with L1, L2 carrying 32 significant bits.
const LN2_1: f64 = 0.6931471803691238;
const LN2_2: f64 = 1.9082149288430703e-10;
const LN2_3: Interval = around(4.275175589747649e-20);

// pi/2 split likewise.
const PIO2_1: f64 = 1.5707963267341256;
const PIO2_2: f64 = 6.077100506303966e-11;
const PIO2_3: Interval = around(2.0222662487959506e-21);

pub fn pi_enclosure() -> Interval {
    PI
}

// ---- exp -------------------------------------------------------------------

const EXP_DEG: usize = 17;

const EXP_COEF: [f64; EXP_DEG + 1] = {
    let mut c = [1.0f64; EXP_DEG + 1];
    let mut k = 1;
    while k <= EXP_DEG {
        c[k] = c[k - 1] / k as f64;
        k += 1;
    }
    c
};

// Relative bound on Horner rounding (gamma_{2n}), coefficient rounding
// (gamma_n) and the Taylor tail, for |r| <= ln2/2 + tiny.
const EXP_REL_ERR: f64 = 2e-14;

#[inline]
fn exp_poly(r: f64) -> f64 {
    let mut p = EXP_COEF[EXP_DEG];
    for k in (0..EXP_DEG).rev() {
        p = p * r + EXP_COEF[k];
    }
    p
}

#[inline]
fn pow2(k: i64) -> f64 {
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// Enclosure of e^x for a float x.
pub(crate) fn exp_point(x: f64) -> Interval {
    if x.is_nan() {
        return Interval::ENTIRE;
    }
    if x > 709.7 {
        return Interval::raw(f64::MAX, f64::INFINITY);
    }
    if x < -745.0 {
        return Interval::raw(0.0, f64::from_bits(1));
    }
    let k = (x * std::f64::consts::LOG2_E).round();
    let r = Interval::point(x) - Interval::point(k) * LN2_1;
    let r = r - Interval::point(k) * LN2_2 - Interval::point(k) * LN2_3;
    let plo = exp_poly(r.lo());
    let phi = exp_poly(r.hi());
    let lo = mul_dn(plo, 1.0 - EXP_REL_ERR);
    let hi = mul_up(phi, 1.0 + EXP_REL_ERR);
    let k = k as i64;
    if k >= -1000 {
        let s = pow2(k);
        Interval::raw(mul_dn(lo, s), mul_up(hi, s))
    } else {
        let (s1, s2) = (pow2(k + 600), pow2(-600));
        Interval::raw(mul_dn(mul_dn(lo, s1), s2), mul_up(mul_up(hi, s1), s2))
    }
}

// ---- log -------------------------------------------------------------------

const LOG_TERMS: usize = 15;

fn log_coef() -> &'static [Interval; LOG_TERMS] {
    static C: OnceLock<[Interval; LOG_TERMS]> = OnceLock::new();
    C.get_or_init(|| std::array::from_fn(|j| Interval::ONE / Interval::point((2 * j + 1) as f64)))
}

/// Enclosure of ln x for a positive float x.
pub(crate) fn log_point(x: f64) -> Interval {
    debug_assert!(x > 0.0);
    if x == f64::INFINITY {
        return Interval::raw(709.0, f64::INFINITY);
    }
    let (mut x, mut e) = (x, 0i64);
    if x < f64::MIN_POSITIVE {
        x *= pow2(54);
        e -= 54;
    }
    let bits = x.to_bits();
    e += ((bits >> 52) & 0x7ff) as i64 - 1023;
    let mut m = f64::from_bits((bits & ((1u64 << 52) - 1)) | (1023u64 << 52));
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    // ln m = 2 atanh z, |z| <= 0.1716
    let z = (Interval::point(m) - 1.0) / (Interval::point(m) + 1.0);
    let w = z.sqr();
    let c = log_coef();
    let mut s = c[LOG_TERMS - 1];
    for j in (0..LOG_TERMS - 1).rev() {
        s = s * w + c[j];
    }
    // tail 2|z|^(2J+3)/((2J+3)(1-z^2)) with J = LOG_TERMS-1 is below 1e-24
    let lnm = (z * s * 2.0).inflate(1e-24);
    lnm + Interval::point(e as f64) * LN2
}

// ---- sin / cos ---------------------------------------------------------------

const TRIG_TERMS: usize = 12;

fn trig_coef() -> &'static ([Interval; TRIG_TERMS], [Interval; TRIG_TERMS]) {
    static C: OnceLock<([Interval; TRIG_TERMS], [Interval; TRIG_TERMS])> = OnceLock::new();
    C.get_or_init(|| {
        // sin: (-1)^j/(2j+1)!, cos: (-1)^j/(2j)!
        let mut s = [Interval::ONE; TRIG_TERMS];
        let mut c = [Interval::ONE; TRIG_TERMS];
        let mut f = Interval::ONE;
        for j in 1..TRIG_TERMS {
            f = f / Interval::point(((2 * j - 1) * (2 * j)) as f64);
            c[j] = if j % 2 == 1 { -f } else { f };
            let g = f / Interval::point((2 * j + 1) as f64);
            s[j] = if j % 2 == 1 { -g } else { g };
        }
        (s, c)
    })
}

fn sincos_reduced(r: Interval) -> (Interval, Interval) {
    let (cs, cc) = trig_coef();
    let w = r.sqr();
    let mut s = cs[TRIG_TERMS - 1];
    let mut c = cc[TRIG_TERMS - 1];
    for j in (0..TRIG_TERMS - 1).rev() {
        s = s * w + cs[j];
        c = c * w + cc[j];
    }
    // |r| <= 0.786: tails below |r|^24/24! < 1e-25
    ((r * s).inflate(1e-25), c.inflate(1e-25))
}

const UNIT: Interval = Interval::raw(-1.0, 1.0);

/// Enclosures of (sin x, cos x) for a float x.
pub(crate) fn sincos_point(x: f64) -> (Interval, Interval) {
    if !x.is_finite() || x.abs() > 1e5 {
        return (UNIT, UNIT);
    }
    let k = (x * std::f64::consts::FRAC_2_PI).round();
    let kk = Interval::point(k);
    let r = Interval::point(x) - kk * PIO2_1 - kk * PIO2_2 - kk * PIO2_3;
    let (s, c) = sincos_reduced(r);
    let (s, c) = match (k as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    };
    (s.intersect(UNIT).unwrap_or(UNIT), c.intersect(UNIT).unwrap_or(UNIT))
}

/// Does X possibly contain a point of the form offset + 2*pi*j?
fn may_contain_lattice(x: Interval, offset: Interval) -> bool {
    let y = (x - offset) / (PI * 2.0);
    if !y.is_finite() {
        return true;
    }
    y.hi().floor() >= y.lo().ceil()
}

impl Interval {
    #[inline]
    pub fn exp(self) -> Interval {
        if self.is_point() {
            return exp_point(self.lo);
        }
        Interval::raw(exp_point(self.lo).lo, exp_point(self.hi).hi)
    }

    pub fn ln(self) -> Result<Interval> {
        if !(self.lo > 0.0) {
            return Err(domain("log of a non-positive interval"));
        }
        if self.is_point() {
            return Ok(log_point(self.lo));
        }
        Ok(Interval::raw(log_point(self.lo).lo, log_point(self.hi).hi))
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(domain("sqrt of a negative argument"));
        }
        Ok(Interval::raw(sqrt_dn(self.lo), sqrt_up(self.hi)))
    }

    /// x^(p/q) for x >= 0 and p, q > 0; exact root extraction at zero.
    pub fn pow_rational(self, p: u32, q: u32) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(domain("fractional power of a negative argument"));
        }
        if q == 0 {
            return Err(domain("zero denominator in exponent"));
        }
        let e = Interval::point(p as f64) / Interval::point(q as f64);
        let at = |x: f64| -> Interval {
            if x == 0.0 {
                Interval::ZERO
            } else {
                (e * log_point(x)).exp()
            }
        };
        if p == 0 {
            return Ok(Interval::ONE);
        }
        if self.is_point() {
            return Ok(at(self.lo));
        }
        Ok(Interval::raw(at(self.lo).lo, at(self.hi).hi))
    }

    /// Real cube root, defined for negative arguments by odd symmetry.
    pub fn cbrt(self) -> Interval {
        let pos = |x: f64| Interval::point(x).pow_rational(1, 3).expect("nonnegative");
        let at = |x: f64| if x < 0.0 { -pos(-x) } else { pos(x) };
        Interval::raw(at(self.lo).lo, at(self.hi).hi)
    }

    pub fn pow_int(self, n: i32) -> Result<Interval> {
        if n >= 0 {
            return Ok(self.powi(n as u32));
        }
        if self.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        Ok(self.powi(n.unsigned_abs()).recip())
    }

    pub fn sin(self) -> Interval {
        if !self.is_finite() || self.width() >= 6.28 {
            return UNIT;
        }
        let a = sincos_point(self.lo).0;
        let b = sincos_point(self.hi).0;
        let mut r = a.hull(b);
        let half = PI * 0.5;
        if may_contain_lattice(self, half) {
            r = Interval::raw(r.lo, 1.0);
        }
        if may_contain_lattice(self, -half) {
            r = Interval::raw(-1.0, r.hi);
        }
        r
    }

    pub fn cos(self) -> Interval {
        if !self.is_finite() || self.width() >= 6.28 {
            return UNIT;
        }
        let a = sincos_point(self.lo).1;
        let b = sincos_point(self.hi).1;
        let mut r = a.hull(b);
        if may_contain_lattice(self, Interval::ZERO) {
            r = Interval::raw(r.lo, 1.0);
        }
        if may_contain_lattice(self, PI) {
            r = Interval::raw(-1.0, r.hi);
        }
        r
    }

    /// tan on one monotone branch; fails if the interval may contain a pole.
    pub fn tan(self) -> Result<Interval> {
        if self.cos().contains_zero() {
            return Err(Error::BranchError);
        }
        let at = |x: f64| {
            let (s, c) = sincos_point(x);
            s / c
        };
        Ok(Interval::raw(at(self.lo).lo, at(self.hi).hi))
    }
}
