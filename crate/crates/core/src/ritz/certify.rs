//! Certification of the reduced 2×2 pencil and the sweep over s.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{assemble_float_pencil, reduced_pencil, sweep_basis, IntervalPencil, RitzConfig};
use crate::error::{domain, Error, Result};
use crate::interval::{subdivide, Interval};
use crate::linalg::{generalized_eigen, Mat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundResult {
    pub s_interval: Interval,
    /// Certified bound on μ̂₂ for every s in `s_interval`.
    pub upper: f64,
    pub float_estimate: f64,
    pub posdef_certified: bool,
    pub panels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub u: f64,
    pub per_subinterval: Vec<UpperBoundResult>,
}

/// Generalized eigenpairs of a floating-point pencil, ascending.
pub fn approx_spectrum(a: &Mat, b: &Mat) -> Result<Vec<(f64, Vec<f64>)>> {
    generalized_eigen(a, b)
}

/// Upper bound on the larger root of det(Â − θB̂) = 0, valid for every real
/// pencil in the interval pencil (Â, B̂).
///
/// The interval quadratic formula gives a first bound; it is then tightened
/// by bisection on τ using the sufficient condition "τB̂ − Â positive
/// semidefinite", which avoids the dependency blow-up of the formula.
///
/// Fails with [`Error::NotPosDef`] unless B̂ is certified positive definite.
/// For a symmetric-definite pencil the discriminant is nonnegative, so its
/// enclosure is clipped at 0 from below; an enclosure lying entirely below 0
/// is reported as [`Error::ComplexRoots`].
pub fn certify_reduced(a: &[[Interval; 2]; 2], b: &[[Interval; 2]; 2]) -> Result<f64> {
    let d = b[0][0] * b[1][1] - b[0][1].sqr();
    if !(b[0][0].lo() > 0.0 && d.lo() > 0.0) {
        return Err(Error::NotPosDef);
    }
    let p = a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[0][1] * 2.0;
    let q = a[0][0] * a[1][1] - a[0][1].sqr();
    let disc = p.sqr() - d * q * 4.0;
    if disc.hi() < 0.0 {
        return Err(Error::ComplexRoots);
    }
    let disc = Interval::new(disc.lo().max(0.0), disc.hi()).map_err(|_| Error::ComplexRoots)?;
    let root = ((p + disc.sqrt()?) / (d * 2.0)).finite()?;
    let (mut lo, mut hi) = (root.lo(), root.hi());
    if psd_shift(a, b, lo) {
        return Ok(lo);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psd_shift(a, b, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// τB − A is positive semidefinite for every pencil in the box.
fn psd_shift(a: &[[Interval; 2]; 2], b: &[[Interval; 2]; 2], tau: f64) -> bool {
    let m = |i: usize, j: usize| b[i][j] * tau - a[i][j];
    let m11 = m(0, 0);
    let det = m11 * m(1, 1) - m(0, 1).sqr();
    m11.lo() > 0.0 && det.lo() >= 0.0
}

fn reduce(m: &[Vec<Interval>], w: &[Vec<f64>; 2]) -> [[Interval; 2]; 2] {
    let n = m.len();
    let mut out = [[Interval::ZERO; 2]; 2];
    for a in 0..2 {
        for b in a..2 {
            let mut acc = Interval::ZERO;
            for i in 0..n {
                let mut row = Interval::ZERO;
                for j in 0..n {
                    row += m[i][j] * w[b][j];
                }
                acc += row * w[a][i];
            }
            out[a][b] = acc;
            out[b][a] = acc;
        }
    }
    out
}

/// Certified upper bound from an n×n interval pencil and two seed vectors,
/// via (WᵀAW, WᵀBW).
pub fn certified_upper_mu2(pencil: &IntervalPencil, seeds: &[Vec<f64>; 2]) -> Result<UpperBoundResult> {
    let n = pencil.dim();
    if seeds.iter().any(|w| w.len() != n) {
        return Err(domain("seed length does not match the pencil"));
    }
    let s = pencil.s_interval;
    let a = reduce(&pencil.a, seeds);
    let b = reduce(&pencil.b, seeds);
    let upper = certify_reduced(&a, &b).map_err(|e| pos_def_fail(e, s))?;
    let (am, bm) = pencil.mid();
    let float_estimate = approx_spectrum(&am, &bm).ok().and_then(|v| v.get(1).map(|p| p.0)).unwrap_or(f64::NAN);
    Ok(UpperBoundResult { s_interval: s, upper, float_estimate, posdef_certified: true, panels: 0 })
}

fn pos_def_fail(e: Error, s: Interval) -> Error {
    match e {
        Error::NotPosDef => Error::PosDefFail { s_lo: s.lo(), s_hi: s.hi() },
        e => e,
    }
}

/// Certified upper bound on μ̂₂^{t₀}(s) for all s in `s`: seeds from the float
/// pencil at the midpoint, then the reduced interval pencil.
pub fn upper_bound_on(s: Interval, t0: Interval, cfg: &RitzConfig) -> Result<UpperBoundResult> {
    let basis = sweep_basis(cfg, s, t0)?;
    let (af, bf) = assemble_float_pencil(s.mid(), t0.mid(), &basis)?;
    let pairs = approx_spectrum(&af, &bf).map_err(|e| pos_def_fail(e, s))?;
    if pairs.len() < 2 {
        return Err(domain("basis must have at least two functions"));
    }
    let seeds = [pairs[0].1.clone(), pairs[1].1.clone()];
    let red = reduced_pencil(s, t0, &basis, &seeds, cfg)?;
    let upper = certify_reduced(&red.a, &red.b).map_err(|e| pos_def_fail(e, s))?;
    Ok(UpperBoundResult {
        s_interval: s,
        upper,
        float_estimate: pairs[1].0,
        posdef_certified: true,
        panels: red.panels,
    })
}

/// Uniform upper bound U ≥ μ̂₂^{t₀}(s) on s ∈ [0, 1] from `n_s` subintervals,
/// with the default basis options.
pub fn algorithm1_sweep(n: usize, n_s: usize, t0: Interval, quad_target: f64) -> Result<SweepResult> {
    let cfg = RitzConfig { n_basis: n, quad_target, ..RitzConfig::default() };
    algorithm1_sweep_with(&cfg, n_s, t0)
}

pub fn algorithm1_sweep_with(cfg: &RitzConfig, n_s: usize, t0: Interval) -> Result<SweepResult> {
    if cfg.n_basis < 2 || n_s == 0 {
        return Err(domain("sweep needs n ≥ 2 and n_s ≥ 1"));
    }
    let pieces = subdivide(Interval::new(0.0, 1.0)?, n_s);
    let leaves = pieces.par_iter().map(|&s| refine(s, t0, cfg, 0)).collect::<Result<Vec<_>>>()?;
    let per_subinterval: Vec<UpperBoundResult> = leaves.into_iter().flatten().collect();
    let u = per_subinterval.iter().map(|r| r.upper).fold(f64::NEG_INFINITY, f64::max);
    Ok(SweepResult { u, per_subinterval })
}

/// Bisects `s` while its bound exceeds `cfg.refine_above` (or certification
/// fails) and the depth budget allows.
fn refine(s: Interval, t0: Interval, cfg: &RitzConfig, depth: u32) -> Result<Vec<UpperBoundResult>> {
    let res = upper_bound_on(s, t0, cfg);
    let needs_split = match &res {
        Ok(r) => r.upper > cfg.refine_above,
        Err(Error::PosDefFail { .. } | Error::ComplexRoots) => true,
        Err(_) => false,
    };
    if !needs_split || depth >= cfg.max_refine_depth {
        return res.map(|r| vec![r]);
    }
    let m = s.mid();
    let halves = [Interval::new(s.lo(), m)?, Interval::new(m, s.hi())?];
    let (l, r) = rayon::join(|| refine(halves[0], t0, cfg, depth + 1), || refine(halves[1], t0, cfg, depth + 1));
    let mut out = l?;
    out.extend(r?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64) -> Interval {
        Interval::point(x)
    }

    #[test]
    fn diagonal_reduced_pencil() {
        let a = [[pt(2.0), pt(0.0)], [pt(0.0), pt(3.0)]];
        let b = [[pt(1.0), pt(0.0)], [pt(0.0), pt(1.0)]];
        assert_eq!(certify_reduced(&a, &b).unwrap(), 3.0);
    }

    #[test]
    fn indefinite_mass_rejected() {
        let a = [[pt(2.0), pt(0.0)], [pt(0.0), pt(3.0)]];
        let b = [[pt(1.0), pt(2.0)], [pt(2.0), pt(1.0)]];
        assert_eq!(certify_reduced(&a, &b), Err(Error::NotPosDef));
    }
}
