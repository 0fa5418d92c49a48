//! Reversed Airy function 𝒜(x) = Ai(−x) and its derivatives on |x| ≤ 8.
//!
//! Ai(z) = c₁ f(z) − c₂ g(z) with c₁ = Ai(0), c₂ = −Ai′(0) > 0 and the two
//! entire auxiliary series
//!
//!   f = Σ z^{3k} / Π_{j≤k} (3j−1)(3j),   g = Σ z^{3k+1} / Π_{j≤k} (3j)(3j+1).
//!
//! Each series (and its term-wise derivatives) is a product recurrence
//! t_k = t_{k−1}·z³/d(k) with d increasing, so once r = |z|³/d(n+1) < 1 the tail
//! after term n is bounded by |t_n|·r/(1−r).
//!
//! For point arguments the default path accumulates in double-double and adds
//! an a-priori bound on the double-double rounding error; for interval
//! arguments the plain interval series is combined with a monotonicity or
//! mean-value refinement, which removes most of the wrapping that the
//! alternating, growing terms cause for |x| > 3.

use crate::error::{domain, Error, Result};
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Accumulation {
    Double,
    DoubleDouble,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AirySeriesConfig {
    pub max_terms: usize,
    pub domain_radius: f64,
    pub accumulation: Accumulation,
}

impl Default for AirySeriesConfig {
    fn default() -> Self {
        AirySeriesConfig { max_terms: 80, domain_radius: 8.0, accumulation: Accumulation::DoubleDouble }
    }
}

/// Ai(0) and −Ai′(0) as unevaluated double-double sums (error < 1e-33).
const AI0: (f64, f64) = (0.3550280538878172, 2.05233632436212e-17);
const MAI1: (f64, f64) = (0.2588194037928068, -2.522243111610832e-17);

const PRECISION_LIMIT: f64 = 1e-6;

#[derive(Clone, Copy)]
enum Order {
    Value,
    First,
    Second,
}

#[derive(Clone, Copy)]
struct Series {
    first_index: usize,
    denom: fn(usize) -> f64,
}

fn series_pair(order: Order) -> (Series, Series) {
    fn df(k: usize) -> f64 {
        ((3 * k - 1) * (3 * k)) as f64
    }
    fn dg(k: usize) -> f64 {
        ((3 * k) * (3 * k + 1)) as f64
    }
    fn dfp(k: usize) -> f64 {
        ((3 * k - 3) * (3 * k - 1)) as f64
    }
    fn dgp(k: usize) -> f64 {
        ((3 * k) * (3 * k - 2)) as f64
    }
    fn dfpp(k: usize) -> f64 {
        ((3 * k - 3) * (3 * k - 4)) as f64
    }
    fn dgpp(k: usize) -> f64 {
        ((3 * k - 2) * (3 * k - 3)) as f64
    }
    match order {
        Order::Value => (Series { first_index: 0, denom: df }, Series { first_index: 0, denom: dg }),
        Order::First => (Series { first_index: 1, denom: dfp }, Series { first_index: 0, denom: dgp }),
        Order::Second => (Series { first_index: 1, denom: dfpp }, Series { first_index: 1, denom: dgpp }),
    }
}

/// First terms of (f, g) derivative series at z, as intervals.
fn first_terms(order: Order, z: Interval) -> (Interval, Interval) {
    match order {
        Order::Value => (Interval::ONE, z),
        Order::First => (z.sqr() * 0.5, Interval::ONE),
        Order::Second => (z, z.sqr()),
    }
}

fn sum_interval(s: Series, first: Interval, z3: Interval, cfg: &AirySeriesConfig) -> Result<Interval> {
    let zm3 = z3.mag();
    let mut t = first;
    let mut sum = first;
    let mut k = s.first_index;
    loop {
        let d = (s.denom)(k + 1);
        let r = zm3 / d;
        let tail_ok = r < 0.5;
        if tail_ok {
            let tail = t.mag() * r / (1.0 - r) * (1.0 + 1e-12);
            if tail <= 1e-19 * sum.mag() || tail < 1e-300 || k + 1 >= s.first_index + cfg.max_terms {
                return Ok(sum.inflate(tail));
            }
        } else if k + 1 >= s.first_index + cfg.max_terms {
            return Err(domain("Airy series did not reach its convergent tail"));
        }
        k += 1;
        t = t * z3 / d;
        sum += t;
    }
}

// ---- double-double ----------------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        Dd { hi, lo }
    }
    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        let e = e + (self.hi * y.lo + self.lo * y.hi);
        let (hi, lo) = fast_two_sum(p, e);
        Dd { hi, lo }
    }
    fn div_f(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, pe) = two_prod(q1, d);
        let (s, e) = two_sum(self.hi, -p);
        let e = e - pe + self.lo;
        let q2 = (s + e) / d;
        let (hi, lo) = fast_two_sum(q1, q2);
        Dd { hi, lo }
    }
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

// u² for binary64; a single double-double operation errs by a few u² relative.
const U2: f64 = 1.232595164407831e-32;

/// Returns (sum, Σ|terms| upper bound, tail bound, terms used).
fn sum_dd(s: Series, first: Dd, z3: Dd, cfg: &AirySeriesConfig) -> Result<(Dd, f64, f64, usize)> {
    let zm3 = z3.hi.abs() * (1.0 + 1e-15);
    let mut t = first;
    let mut sum = first;
    let mut abs = first.hi.abs();
    let mut k = s.first_index;
    loop {
        let d = (s.denom)(k + 1);
        let r = zm3 / d;
        let n = k + 1 - s.first_index;
        if r < 0.5 {
            let tail = t.hi.abs() * (1.0 + 1e-12) * r / (1.0 - r);
            if tail <= 1e-34 * abs || tail < 1e-300 || n >= cfg.max_terms {
                return Ok((sum, abs * (1.0 + 1e-12), tail, n));
            }
        } else if n >= cfg.max_terms {
            return Err(domain("Airy series did not reach its convergent tail"));
        }
        k += 1;
        t = t.mul(z3).div_f(d);
        sum = sum.add(t);
        abs += t.hi.abs();
    }
}

fn point_dd(order: Order, z: f64, cfg: &AirySeriesConfig) -> Result<Interval> {
    let (sf, sg) = series_pair(order);
    let (p, e) = two_prod(z, z);
    let z2 = Dd { hi: p, lo: e };
    let z3 = z2.mul(Dd::from(z));
    let zd = Dd::from(z);
    let (ff, gf) = match order {
        Order::Value => (Dd::from(1.0), zd),
        Order::First => (Dd { hi: 0.5 * z2.hi, lo: 0.5 * z2.lo }, Dd::from(1.0)),
        Order::Second => (zd, z2),
    };
    let (f, fa, ft, nf) = sum_dd(sf, ff, z3, cfg)?;
    let (g, ga, gt, ng) = sum_dd(sg, gf, z3, cfg)?;
    let c1 = Dd { hi: AI0.0, lo: AI0.1 };
    let c2 = Dd { hi: MAI1.0, lo: MAI1.1 };
    let v = c1.mul(f).add(c2.mul(g).neg());
    // Generous a-priori bound: each term carries at most ~4n double-double
    // roundings of relative size ≤ 4u², the summation adds ≤ 4u²·n·Σ|t|, and
    // the final combination a few more; we budget 64(n+4)u² on Σ|t|.
    let n = nf.max(ng) as f64 + 4.0;
    let rounding = 64.0 * n * U2 * (0.36 * fa + 0.26 * ga + 1.0);
    let consts = 1e-32 * (fa + ga);
    let err = (rounding + consts + 0.36 * ft + 0.26 * gt) * 2.0;
    let base = Interval::point(v.hi) + Interval::point(v.lo);
    Ok(base.inflate(err))
}

fn naive(order: Order, z: Interval, cfg: &AirySeriesConfig) -> Result<Interval> {
    let (sf, sg) = series_pair(order);
    let z3 = z.powi(3);
    let (ff, gf) = first_terms(order, z);
    let f = sum_interval(sf, ff, z3, cfg)?;
    let g = sum_interval(sg, gf, z3, cfg)?;
    let c1 = Interval::point(AI0.0).inflate(1e-16);
    let c2 = Interval::point(MAI1.0).inflate(1e-16);
    Ok(c1 * f - c2 * g)
}

/// Ai^{(order)}(z) at a float.
fn point_eval(order: Order, z: f64, cfg: &AirySeriesConfig) -> Result<Interval> {
    match cfg.accumulation {
        Accumulation::DoubleDouble => point_dd(order, z, cfg),
        Accumulation::Double => naive(order, Interval::point(z), cfg),
    }
}

fn check(x: Interval, cfg: &AirySeriesConfig) -> Result<()> {
    if !x.is_finite() || x.mag() > cfg.domain_radius {
        return Err(domain(format!("Airy argument {x} outside |x| <= {}", cfg.domain_radius)));
    }
    Ok(())
}

fn sign(order: Order) -> f64 {
    // d^k/dx^k Ai(−x) = (−1)^k Ai^{(k)}(−x)
    match order {
        Order::First => -1.0,
        _ => 1.0,
    }
}

fn reversed_point(order: Order, x: f64, cfg: &AirySeriesConfig) -> Result<Interval> {
    Ok(point_eval(order, -x, cfg)? * sign(order))
}

fn reversed_naive(order: Order, x: Interval, cfg: &AirySeriesConfig) -> Result<Interval> {
    Ok(naive(order, -x, cfg)? * sign(order))
}

fn evaluate(order: Order, x: Interval, cfg: &AirySeriesConfig) -> Result<Interval> {
    check(x, cfg)?;
    if x.is_point() {
        let v = reversed_point(order, x.lo(), cfg)?;
        if v.width() > PRECISION_LIMIT {
            return Err(Error::PrecisionLoss { width: v.width() });
        }
        return Ok(v);
    }
    // Second-order Taylor form about the midpoint, with the ODE
    // 𝒜″ = −x𝒜 supplying every derivative from (𝒜, 𝒜′); only the remainder
    // needs enclosures over the whole of x, for which the plain series is
    // good enough because it is multiplied by (x−m)².
    let nv = reversed_naive(Order::Value, x, cfg)?;
    let np = reversed_naive(Order::First, x, cfg)?;
    let m = x.mid();
    let am = reversed_point(Order::Value, m, cfg)?;
    let apm = reversed_point(Order::First, m, cfg)?;
    let (n, p0, p1, r2) = match order {
        Order::Value => (nv, am, apm, -(x * nv)),
        Order::First => (np, apm, -(am * m), -(nv + x * np)),
        Order::Second => (
            reversed_naive(Order::Second, x, cfg)?,
            reversed_point(Order::Second, m, cfg)?,
            -(am + apm * m),
            x.sqr() * nv - np * 2.0,
        ),
    };
    let dx = x - m;
    let taylor = p0 + p1 * dx + r2 * dx.sqr() * 0.5;
    let slope = p1 + r2 * dx;
    let mut r = taylor.intersect(n).unwrap_or(n);
    if !slope.contains_zero() {
        let mono = reversed_point(order, x.lo(), cfg)?.hull(reversed_point(order, x.hi(), cfg)?);
        r = mono.intersect(r).unwrap_or(r);
    }
    Ok(r)
}

/// 𝒜(x) = Ai(−x).
pub fn eval_a(x: Interval, cfg: &AirySeriesConfig) -> Result<Interval> {
    evaluate(Order::Value, x, cfg)
}

/// 𝒜′(x) = −Ai′(−x).
pub fn eval_a_prime(x: Interval, cfg: &AirySeriesConfig) -> Result<Interval> {
    evaluate(Order::First, x, cfg)
}

/// 𝒜″(x) = Ai″(−x), from the term-wise differentiated series.
pub fn eval_a_second(x: Interval, cfg: &AirySeriesConfig) -> Result<Interval> {
    evaluate(Order::Second, x, cfg)
}

/// Plain interval series without refinement (for diagnostics and tests).
pub fn eval_a_naive(x: Interval, cfg: &AirySeriesConfig) -> Result<Interval> {
    check(x, cfg)?;
    reversed_naive(Order::Value, x, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> AirySeriesConfig {
        AirySeriesConfig::default()
    }

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn values_at_zero() {
        let a = eval_a(Interval::ZERO, &cfg()).unwrap();
        assert!(a.contains(0.355028053887817239) && a.width() < 1e-15);
        let b = eval_a_prime(Interval::ZERO, &cfg()).unwrap();
        assert!(b.contains(0.258819403792806798) && b.width() < 1e-15);
    }

    #[test]
    fn zeros_are_straddled() {
        assert!(eval_a(iv(2.338107, 2.338108), &cfg()).unwrap().contains_zero());
        assert!(eval_a_prime(iv(1.018792, 1.018794), &cfg()).unwrap().contains_zero());
        assert!(eval_a_prime(iv(3.248197, 3.248199), &cfg()).unwrap().contains_zero());
        assert!(!eval_a_prime(iv(3.2481, 3.24819), &cfg()).unwrap().contains_zero());
    }

    #[test]
    fn reference_values() {
        // Ai(−x), −Ai′(−x) from mpmath at 25 digits
        let cases = [
            (6.0, -0.32914517362982311, -0.34593548728134289, 1e-15),
            (-3.0, 0.0065911393574607191, 0.011912976705951318, 1e-16),
            (7.75, 0.17497790079676515, -0.81123273550652826, 1e-15),
        ];
        for (x, a, ap, tol) in cases {
            let va = eval_a(Interval::point(x), &cfg()).unwrap();
            let vp = eval_a_prime(Interval::point(x), &cfg()).unwrap();
            assert!((va.mid() - a).abs() < tol * 10.0 + 1e-15, "{x}: {va} vs {a}");
            assert!((vp.mid() - ap).abs() < tol * 10.0 + 1e-15, "{x}: {vp} vs {ap}");
        }
    }

    #[test]
    fn double_double_is_tight() {
        for i in 0..=24 {
            let x = -6.0 + 0.5 * i as f64;
            let v = eval_a(Interval::point(x), &cfg()).unwrap();
            assert!(v.width() <= 1e-10, "{x}: {}", v.width());
        }
    }

    #[test]
    fn outside_radius_is_rejected() {
        assert!(matches!(eval_a(Interval::point(8.5), &cfg()), Err(Error::DomainError(_))));
    }

    #[test]
    fn interval_refinement_is_tight() {
        let x = iv(5.0, 5.001);
        let v = eval_a(x, &cfg()).unwrap();
        let n = eval_a_naive(x, &cfg()).unwrap();
        assert!(v.width() < 1e-3 && v.width() <= n.width(), "{v} {n}");
        assert!(v.contains(0.35076100902411431979));
    }
}
