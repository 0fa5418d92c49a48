//! The triangle family T(s,t) with vertices (−1,0), (1,0), (s,t), its height
//! profile, the scaled interval Iᵗ and the two one-dimensional potentials.
//!
//! Notation used throughout the crate: T = t^{−2/3}, so that
//! Iᵗ = [a_l, a_r] = [−T(1+s), T(1−s)] and the apex sits at x = 0.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::interval::{pi_enclosure, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleParams {
    pub s: Interval,
    pub t: Interval,
}

impl TriangleParams {
    /// `s ⊆ (−1, 1]` (the closed end s = 1 is admitted for sweeps) and `t > 0`.
    pub fn new(s: Interval, t: Interval) -> Result<Self> {
        if !(s.lo() > -1.0 && s.hi() <= 1.0) {
            return Err(domain(format!("apex abscissa {s} outside (-1, 1]")));
        }
        if !(t.lo() > 0.0) || !t.is_finite() {
            return Err(domain(format!("apex height {t} must be positive")));
        }
        Ok(TriangleParams { s, t })
    }

    pub fn point(s: f64, t: f64) -> Result<Self> {
        Self::new(Interval::point(s), Interval::point(t))
    }

    /// T = t^{−2/3}.
    pub fn big_t(&self) -> Interval {
        self.t.pow_rational(2, 3).expect("t > 0").recip()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledInterval {
    pub a_left: Interval,
    pub a_right: Interval,
}

impl ScaledInterval {
    pub fn length(&self) -> Interval {
        self.a_right - self.a_left
    }

    pub fn contains(&self, x: Interval) -> bool {
        self.a_left.hi() <= x.lo() && x.hi() <= self.a_right.lo()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    Omega,
    OmegaDown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuliRegion {
    pub kind: RegionKind,
    pub t0: Interval,
}

impl ModuliRegion {
    pub fn omega_down() -> Self {
        ModuliRegion { kind: RegionKind::OmegaDown, t0: t0_enclosure() }
    }

    pub fn omega() -> Self {
        ModuliRegion { kind: RegionKind::Omega, t0: t0_enclosure() }
    }

    /// Certified membership; `Indeterminate` when the boxes straddle a boundary.
    pub fn contains(&self, p: &TriangleParams) -> Result<bool> {
        match self.kind {
            RegionKind::OmegaDown => in_omega_down(p),
            RegionKind::Omega => {
                // (s+1)² + t² ≤ 4, t > 0, s ≥ 0
                let r = (p.s + 1.0).sqr() + p.t.sqr();
                let yes = p.s.lo() >= 0.0 && p.t.lo() > 0.0 && r.hi() <= 4.0;
                let no = p.s.hi() < 0.0 || p.t.hi() <= 0.0 || r.lo() > 4.0;
                decide(yes, no)
            }
        }
    }
}

fn decide(yes: bool, no: bool) -> Result<bool> {
    match (yes, no) {
        (true, _) => Ok(true),
        (_, true) => Ok(false),
        _ => Err(Error::Indeterminate),
    }
}

/// Certified enclosure of t₀ = tan(π/60).
pub fn t0_enclosure() -> Interval {
    static T0: OnceLock<Interval> = OnceLock::new();
    *T0.get_or_init(|| (pi_enclosure() / 60.0).tan().expect("pi/60 is far from a pole"))
}

/// (3 + 4π²)/12, the coefficient of h′²/h² in V(t,x).
pub fn slope_coefficient() -> Interval {
    let pi2 = pi_enclosure().sqr();
    (pi2 * 4.0 + 3.0) / 12.0
}

fn unit_interval() -> Interval {
    Interval::new(-1.0, 1.0).unwrap()
}

/// h on the clipped pieces of X left and right of the apex.
pub fn height_profile(p: &TriangleParams, x: Interval) -> Result<Interval> {
    if !unit_interval().encloses(x) {
        return Err(domain(format!("{x} not inside [-1, 1]")));
    }
    let left = |x: Interval| p.t * (x + 1.0) / (p.s + 1.0);
    let right = |x: Interval| p.t * (1.0 - x) / (1.0 - p.s);
    let mut out: Option<Interval> = None;
    let mut put = |v: Interval| out = Some(out.map_or(v, |o| o.hull(v)));
    if x.lo() <= p.s.hi() {
        let hi = x.hi().min(p.s.hi());
        put(left(Interval::raw(x.lo(), hi)));
    }
    if x.hi() >= p.s.lo() {
        let lo = x.lo().max(p.s.lo());
        put(right(Interval::raw(lo, x.hi())));
    }
    let v = out.expect("x is nonempty");
    // h is a tent of height t: clip the piecewise enclosures to [0, t].
    Ok(v.intersect(Interval::raw(0.0, p.t.hi())).unwrap_or(v))
}

/// h′ per piece; the hull of both slopes when X may straddle the apex.
pub fn height_slope(p: &TriangleParams, x: Interval) -> Result<Interval> {
    if !unit_interval().encloses(x) {
        return Err(domain(format!("{x} not inside [-1, 1]")));
    }
    let left = p.t / (p.s + 1.0);
    let right = -(p.t / (1.0 - p.s));
    if x.hi() < p.s.lo() {
        Ok(left)
    } else if x.lo() > p.s.hi() {
        Ok(right)
    } else if p.s.hi() >= 1.0 {
        Err(domain("slope right of an apex at s = 1"))
    } else {
        Ok(left.hull(right))
    }
}

pub fn scaled_interval(p: &TriangleParams) -> ScaledInterval {
    let big_t = p.big_t();
    ScaledInterval { a_left: -(big_t * (p.s + 1.0)), a_right: big_t * (1.0 - p.s) }
}

/// V(t,x) in the cancelled form
///   left:  π²T[(a_l/(x−a_l))² − 1] + c/(x−a_l)²,
///   right: π²T[(a_r/(a_r−x))² − 1] + c/(a_r−x)²,
/// with c = (3+4π²)/12; hull of both when x straddles the apex x = 0.
pub fn potential_vt(p: &TriangleParams, x: Interval) -> Result<Interval> {
    let iv = scaled_interval(p);
    if x.lo() < iv.a_left.lo() || x.hi() > iv.a_right.hi() {
        return Err(domain(format!("{x} outside the scaled interval")));
    }
    let pi2t = pi_enclosure().sqr() * p.big_t();
    let c = slope_coefficient();
    let left = |x: Interval| -> Result<Interval> {
        let d = x - iv.a_left;
        if !d.is_positive() {
            return Err(Error::EndpointSingularity);
        }
        Ok(pi2t * ((iv.a_left / d).sqr() - 1.0) + c / d.sqr())
    };
    let right = |x: Interval| -> Result<Interval> {
        let d = iv.a_right - x;
        if !d.is_positive() {
            return Err(Error::EndpointSingularity);
        }
        Ok(pi2t * ((iv.a_right / d).sqr() - 1.0) + c / d.sqr())
    };
    if x.hi() <= 0.0 {
        left(x)
    } else if x.lo() >= 0.0 {
        right(x)
    } else {
        Ok(left(Interval::raw(x.lo(), 0.0))?.hull(right(Interval::raw(0.0, x.hi()))?))
    }
}

/// V(t,x) straight from its definition
///   t^{4/3} ( π²/h(ξ)² + (3+4π²) h′(ξ)²/(12 h(ξ)²) − π²/t² ),  ξ = t^{2/3}x + s,
/// used to cross-check the cancelled form.
pub fn potential_vt_direct(p: &TriangleParams, x: Interval) -> Result<Interval> {
    let t23 = p.t.pow_rational(2, 3)?;
    let xi = t23 * x + p.s;
    let xi = xi.intersect(unit_interval()).ok_or_else(|| domain("point outside the triangle"))?;
    let h = height_profile(p, xi)?;
    if h.contains_zero() {
        return Err(Error::EndpointSingularity);
    }
    let hp = height_slope(p, xi)?;
    let pi2 = pi_enclosure().sqr();
    let t43 = p.t.pow_rational(4, 3)?;
    Ok(t43 * (pi2 / h.sqr() + slope_coefficient() * hp.sqr() / h.sqr() - pi2 / p.t.sqr()))
}

/// V(x) = 2π²|x|/(1−s) for x > 0 and 2π²|x|/(1+s) for x < 0.
pub fn potential_limit(s: Interval, x: Interval) -> Result<Interval> {
    let two_pi2 = pi_enclosure().sqr() * 2.0;
    let mut out: Option<Interval> = None;
    if x.lo() <= 0.0 {
        let xl = Interval::raw(x.lo(), x.hi().min(0.0));
        out = Some(two_pi2 * xl.abs() / (s + 1.0));
    }
    if x.hi() > 0.0 {
        if s.hi() >= 1.0 {
            return Err(domain("potential for x > 0 is undefined at s = 1"));
        }
        let xr = Interval::raw(x.lo().max(0.0), x.hi());
        let v = two_pi2 * xr / (1.0 - s);
        out = Some(out.map_or(v, |o| o.hull(v)));
    }
    Ok(out.expect("x nonempty"))
}

/// 0 ≤ s < 1 and 0 < t ≤ tan(π/60), decided by interval comparison.
pub fn in_omega_down(p: &TriangleParams) -> Result<bool> {
    let t0 = t0_enclosure();
    let yes = p.s.lo() >= 0.0 && p.s.hi() < 1.0 && p.t.lo() > 0.0 && p.t.hi() <= t0.lo();
    let no = p.s.hi() < 0.0 || p.s.lo() >= 1.0 || p.t.hi() <= 0.0 || p.t.lo() > t0.hi();
    decide(yes, no)
}
