//! Certified facts about the characteristic function
//!
//!   f_s(κ) = a 𝒜(P) 𝒜′(Q) + b 𝒜(Q) 𝒜′(P),
//!   a = (1+s)^{1/3}, b = (1−s)^{1/3}, P = a²κ, Q = b²κ,
//!
//! whose positive zeros κ_k(s) give μ̄_k(s) = (2π²)^{2/3} κ_k(s).
//!
//! Using 𝒜″(x) = −x𝒜(x) the partial derivatives collapse to
//!
//!   ∂f/∂κ = 2𝒜′(P)𝒜′(Q) − 2κ ab 𝒜(P)𝒜(Q),
//!   ∂f/∂s = ⅓ [𝒜(P)𝒜′(Q)/a² − 𝒜(Q)𝒜′(P)/b²],
//!
//! which give cheap mean-value forms. The s-form blows up at s = 1 and is only
//! used on pieces ending below 1 − 10⁻³.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::airy::{eval_a, eval_a_prime, AirySeriesConfig};
use crate::error::{domain, Error, Result};
use crate::interval::{pi_enclosure, Interval};

/// Upper end of the admissible κ range: keeps 2^{2/3}κ inside the series domain.
pub const KAPPA_MAX: f64 = 4.9;

const ROOT_WIDTH: f64 = 1e-4;
const MIN_PIECE: f64 = 1e-12;
const S_FORM_LIMIT: f64 = 1.0 - 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootEvidence {
    SignChange,
    IntervalNewtonUnique,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootEnclosure {
    pub root: Interval,
    /// 1-based position among the positive roots.
    pub index: usize,
    pub evidence: RootEvidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityCertificate {
    pub kappa_box: Interval,
    pub s_cover: Vec<Interval>,
    pub min_inf: f64,
}

/// Sign in front of the second product; only `Plus` is the characteristic
/// function, `Minus` vanishes identically at s = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plus,
    Minus,
}

struct Parts {
    a: Interval,
    b: Interval,
    ap: Interval,
    aq: Interval,
    dp: Interval,
    dq: Interval,
}

fn parts(s: Interval, kappa: Interval) -> Result<Parts> {
    if s.lo() < 0.0 || s.hi() > 1.0 {
        return Err(domain(format!("s = {s:?} outside [0, 1]")));
    }
    if kappa.lo() < 0.0 || kappa.hi() > KAPPA_MAX {
        return Err(domain(format!("kappa = {kappa:?} outside [0, {KAPPA_MAX}]")));
    }
    let cfg = AirySeriesConfig::default();
    // 1 − s ≥ 0 must survive outward rounding
    let d = Interval::ONE - s;
    let one_minus = Interval::new(d.lo().max(0.0), d.hi().max(0.0))?;
    let a = (s + 1.0).cbrt();
    let b = one_minus.cbrt();
    let p = a.sqr() * kappa;
    let q = b.sqr() * kappa;
    Ok(Parts {
        a,
        b,
        ap: eval_a(p, &cfg)?,
        aq: eval_a(q, &cfg)?,
        dp: eval_a_prime(p, &cfg)?,
        dq: eval_a_prime(q, &cfg)?,
    })
}

fn combine(p: &Parts, v: Variant) -> Interval {
    let second = p.b * p.aq * p.dp;
    match v {
        Variant::Plus => p.a * p.ap * p.dq + second,
        Variant::Minus => p.a * p.ap * p.dq - second,
    }
}

/// Enclosure of ∂f_s/∂κ.
pub fn eval_fs_dkappa(s: Interval, kappa: Interval) -> Result<Interval> {
    let p = parts(s, kappa)?;
    Ok(p.dp * p.dq * 2.0 - kappa * p.a * p.b * p.ap * p.aq * 2.0)
}

fn eval_fs_ds(s: Interval, kappa: Interval) -> Result<Interval> {
    let p = parts(s, kappa)?;
    Ok((p.ap * p.dq / p.a.sqr() - p.aq * p.dp / p.b.sqr()) / 3.0)
}

/// Either sign variant, naive evaluation only.
pub fn eval_fs_variant(s: Interval, kappa: Interval, v: Variant) -> Result<Interval> {
    Ok(combine(&parts(s, kappa)?, v))
}

/// Enclosure of f_s(κ) over s × κ (s ⊆ [0,1], κ ⊆ [0, 4.9]): the naive
/// evaluation intersected with mean-value forms.
pub fn eval_fs(s: Interval, kappa: Interval) -> Result<Interval> {
    let mut r = eval_fs_variant(s, kappa, Variant::Plus)?;
    if s.is_point() && kappa.is_point() {
        return Ok(r);
    }
    let (sm, km) = (Interval::point(s.mid()), Interval::point(kappa.mid()));
    let dk = eval_fs_dkappa(s, kappa)?;
    if s.hi() < S_FORM_LIMIT {
        let ds = eval_fs_ds(s, kappa)?;
        let centre = eval_fs_variant(sm, km, Variant::Plus)?;
        let mv = centre + ds * (s - sm) + dk * (kappa - km);
        r = r.intersect(mv).unwrap_or(r);
    } else {
        let centre = eval_fs_variant(s, km, Variant::Plus)?;
        let mv = centre + dk * (kappa - km);
        r = r.intersect(mv).unwrap_or(r);
    }
    Ok(r)
}

fn sign_at(s: Interval, x: f64) -> Result<i8> {
    let v = eval_fs(s, Interval::point(x))?;
    Ok(if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    })
}

enum Piece {
    Empty,
    Root(Interval, RootEvidence),
}

/// Roots in `k` (depth-first from the left, so in increasing order).
fn scan(s: Interval, k: Interval, out: &mut Vec<(Interval, RootEvidence)>) -> Result<()> {
    match classify(s, k)? {
        Some(Piece::Empty) => return Ok(()),
        Some(Piece::Root(r, e)) => {
            out.push((r, e));
            return Ok(());
        }
        None => {}
    }
    if k.width() < MIN_PIECE {
        let (l, h) = (sign_at(s, k.lo())?, sign_at(s, k.hi())?);
        if l * h < 0 {
            out.push((k, RootEvidence::SignChange));
            return Ok(());
        }
        return Err(Error::Inconclusive { lo: k.lo(), hi: k.hi() });
    }
    let m = k.mid();
    scan(s, Interval::new(k.lo(), m)?, out)?;
    scan(s, Interval::new(m, k.hi())?, out)
}

fn classify(s: Interval, k: Interval) -> Result<Option<Piece>> {
    if !eval_fs(s, k)?.contains_zero() {
        return Ok(Some(Piece::Empty));
    }
    let d = eval_fs_dkappa(s, k)?;
    if d.contains_zero() {
        return Ok(None);
    }
    let m = Interval::point(k.mid());
    let n = m - eval_fs(s, m)? / d;
    let Some(nk) = n.intersect(k) else {
        return Ok(Some(Piece::Empty));
    };
    if !k.interior_contains(n) {
        return Ok(None);
    }
    // unique root; contract as far as Newton goes
    let mut r = nk;
    for _ in 0..50 {
        let d = eval_fs_dkappa(s, r)?;
        let m = Interval::point(r.mid());
        let Some(next) = (m - eval_fs(s, m)? / d).intersect(r) else { break };
        if next.width() >= r.width() {
            break;
        }
        r = next;
    }
    if r.width() > ROOT_WIDTH {
        // Newton stalled on a wide piece; let bisection shrink it
        return Ok(None);
    }
    Ok(Some(Piece::Root(r, RootEvidence::IntervalNewtonUnique)))
}

/// All zeros of f_s in (0, kappa_max], certified complete by a cover of
/// sign-definite pieces.
pub fn isolate_positive_roots(s: Interval, kappa_max: f64) -> Result<Vec<RootEnclosure>> {
    if !(kappa_max > 0.0 && kappa_max <= KAPPA_MAX) {
        return Err(domain(format!("kappa_max {kappa_max} outside (0, {KAPPA_MAX}]")));
    }
    let mut found = Vec::new();
    scan(s, Interval::new(0.0, kappa_max)?, &mut found)?;
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(i, (root, evidence))| RootEnclosure { root, index: i + 1, evidence })
        .collect())
}

/// Certifies f_s > 0 on [0,1] × `kappa_box` by adaptive bisection in s.
pub fn certify_no_crossing(kappa_box: Interval, max_depth: u32) -> Result<PositivityCertificate> {
    let starts: Vec<Interval> = crate::interval::subdivide(Interval::new(0.0, 1.0)?, 16);
    let parts = starts
        .par_iter()
        .map(|&s| cover(s, kappa_box, 4, max_depth))
        .collect::<Result<Vec<_>>>()?;
    let mut s_cover = Vec::new();
    let mut min_inf = f64::INFINITY;
    for p in parts {
        for (piece, inf) in p {
            s_cover.push(piece);
            min_inf = min_inf.min(inf);
        }
    }
    Ok(PositivityCertificate { kappa_box, s_cover, min_inf })
}

fn cover(s: Interval, kappa_box: Interval, depth: u32, max_depth: u32) -> Result<Vec<(Interval, f64)>> {
    let f = eval_fs(s, kappa_box)?;
    if f.lo() > 0.0 {
        return Ok(vec![(s, f.lo())]);
    }
    if depth >= max_depth || f.hi() < 0.0 {
        return Err(Error::DepthExceeded { s_lo: s.lo(), s_hi: s.hi() });
    }
    let m = s.mid();
    let mut out = cover(Interval::new(s.lo(), m)?, kappa_box, depth + 1, max_depth)?;
    out.extend(cover(Interval::new(m, s.hi())?, kappa_box, depth + 1, max_depth)?);
    Ok(out)
}

/// (2π²)^{2/3}, enclosed.
pub fn mu_kappa_factor() -> Interval {
    (pi_enclosure().sqr() * 2.0).pow_rational(2, 3).expect("positive base")
}

/// Enclosure of (2π²)^{2/3}·kappa_lower.
pub fn mu_bar_bound(kappa_lower: f64) -> Result<Interval> {
    if !(kappa_lower > 0.0 && kappa_lower.is_finite()) {
        return Err(domain(format!("kappa_lower = {kappa_lower} must be positive")));
    }
    Ok(mu_kappa_factor() * kappa_lower)
}

/// Coefficients (α⁻, α⁺) of the two Airy pieces of the eigenfunction at a
/// certified root: a null vector of the continuity row
/// [𝒜(P), −𝒜(Q)] when that row is informative, else of the derivative row
/// [𝒜′(P)/a, 𝒜′(Q)/b].
pub fn matching_coeffs(s: f64, root: &RootEnclosure) -> Result<(Interval, Interval)> {
    if !(0.0..1.0).contains(&s) {
        return Err(domain(format!("matching needs 0 ≤ s < 1, got {s}")));
    }
    let p = parts(Interval::point(s), root.root)?;
    if !(p.ap.contains_zero() && p.aq.contains_zero()) {
        return Ok((p.aq, p.ap));
    }
    let (r1, r2) = (p.dp / p.a, p.dq / p.b);
    if r1.contains_zero() && r2.contains_zero() {
        return Err(Error::DegenerateRow);
    }
    Ok((r2, -r1))
}

/// Continuity and derivative-row residuals of (α⁻, α⁺) at κ.
pub fn matching_residuals(s: f64, kappa: Interval, alpha: (Interval, Interval)) -> Result<(Interval, Interval)> {
    let p = parts(Interval::point(s), kappa)?;
    let cont = alpha.0 * p.ap - alpha.1 * p.aq;
    let der = alpha.0 * p.dp / p.a + alpha.1 * p.dq / p.b;
    Ok((cont, der))
}
