//! Directed rounding of single float operations without touching the FPU mode.
//!
//! Each helper computes the round-to-nearest result and then uses an
//! error-free transformation (TwoSum, FMA residual) to decide whether the exact
//! value lies below or above it. Only when the residual itself may be inexact
//! (underflow range, non-finite values) do we fall back to unconditional
//! one-ulp stepping.

const TINY: f64 = 1e-290;

#[inline]
fn step_down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

#[inline]
fn step_up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub fn add_dn(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY && a.is_finite() && b.is_finite() {
            f64::MAX
        } else {
            step_down(s)
        };
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            f64::MIN
        } else {
            step_up(s)
        };
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_dn(a: f64, b: f64) -> f64 {
    add_dn(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_dn(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() || p.abs() < TINY {
        if p == 0.0 && (a == 0.0 || b == 0.0) {
            return 0.0;
        }
        return step_down(p);
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() || p.abs() < TINY {
        if p == 0.0 && (a == 0.0 || b == 0.0) {
            return 0.0;
        }
        return step_up(p);
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

#[inline]
pub fn div_dn(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() || q.abs() < TINY || b.abs() < TINY || !b.is_finite() {
        if q == 0.0 && a == 0.0 {
            return 0.0;
        }
        return step_down(q);
    }
    // a - q*b exactly; the sign of (a/b - q) is sign(r)*sign(b).
    let r = (-q).mul_add(b, a);
    if (r < 0.0) != (b < 0.0) && r != 0.0 {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() || q.abs() < TINY || b.abs() < TINY || !b.is_finite() {
        if q == 0.0 && a == 0.0 {
            return 0.0;
        }
        return step_up(q);
    }
    let r = (-q).mul_add(b, a);
    if (r > 0.0) == (b > 0.0) && r != 0.0 {
        q.next_up()
    } else {
        q
    }
}

#[inline]
pub fn sqrt_dn(a: f64) -> f64 {
    let q = a.sqrt();
    if a < TINY || !q.is_finite() {
        return if a == 0.0 { 0.0 } else { step_down(q).max(0.0) };
    }
    if (-q).mul_add(q, a) < 0.0 {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub fn sqrt_up(a: f64) -> f64 {
    let q = a.sqrt();
    if a < TINY || !q.is_finite() {
        return if a == 0.0 { 0.0 } else { step_up(q) };
    }
    if (-q).mul_add(q, a) > 0.0 {
        q.next_up()
    } else {
        q
    }
}
