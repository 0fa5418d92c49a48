//! Second-order finite differences for −u″ + V u = μ u with Dirichlet ends;
//! eigenvalues by Sturm-sequence bisection.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{domain, Result};

#[derive(Clone)]
pub enum Potential1d {
    /// V(t,x) on the scaled interval [−T(1+s), T(1−s)].
    Problem2 { s: f64, t: f64 },
    /// 2π²|x|/(1∓s), the t → 0 limit.
    Problem3 { s: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Potential1d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential1d::Problem2 { s, t } => write!(f, "Problem2 {{ s: {s}, t: {t} }}"),
            Potential1d::Problem3 { s } => write!(f, "Problem3 {{ s: {s} }}"),
            Potential1d::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Half-width of the Problem-3 box at s = 0; V reaches 2π²·30 ≈ 592 at its ends.
pub const PROBLEM3_HALF_WIDTH: f64 = 30.0;

impl Potential1d {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential1d::Problem2 { s, t } => {
                let big_t = t.powf(-2.0 / 3.0);
                let c = (3.0 + 4.0 * PI * PI) / 12.0;
                let a = if x <= 0.0 { -big_t * (1.0 + s) } else { big_t * (1.0 - s) };
                let d = (x - a).abs();
                PI * PI * big_t * ((a / d).powi(2) - 1.0) + c / (d * d)
            }
            Potential1d::Problem3 { s } => {
                if x <= 0.0 {
                    2.0 * PI * PI * -x / (1.0 + s)
                } else {
                    2.0 * PI * PI * x / (1.0 - s)
                }
            }
            Potential1d::Custom(f) => f(x),
        }
    }

    /// The natural domain: Iᵗ for Problem 2, [−30(1+s), 30(1−s)] for Problem 3.
    pub fn default_domain(&self) -> Result<(f64, f64)> {
        match *self {
            Potential1d::Problem2 { s, t } => {
                check_s(s)?;
                if !(t > 0.0) {
                    return Err(domain("t must be positive"));
                }
                let big_t = t.powf(-2.0 / 3.0);
                Ok((-big_t * (1.0 + s), big_t * (1.0 - s)))
            }
            Potential1d::Problem3 { s } => {
                check_s(s)?;
                Ok((-PROBLEM3_HALF_WIDTH * (1.0 + s), PROBLEM3_HALF_WIDTH * (1.0 - s)))
            }
            Potential1d::Custom(_) => Err(domain("custom potentials need an explicit domain")),
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(domain(format!("s = {s} outside [0, 1)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdResult {
    pub eigs: Vec<f64>,
    /// Eigenfunction mass (normalized) within 5% of either end, per eigenvalue.
    pub edge_mass: Vec<f64>,
    /// Some edge mass exceeds 10⁻⁶ on a truncated box (never set for
    /// Problem 2, whose interval is the natural domain).
    pub truncation_warning: bool,
}

pub const EDGE_MASS_LIMIT: f64 = 1e-6;

struct Tridiag {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiag {
    /// Number of eigenvalues below x.
    fn count_below(&self, x: f64) -> usize {
        let mut q = 1.0;
        let mut n = 0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = d - x - if i == 0 { 0.0 } else { self.off * self.off / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs() + 1.0);
            }
            if q < 0.0 {
                n += 1;
            }
        }
        n
    }

    /// The j-th smallest eigenvalue (0-based).
    fn eigenvalue(&self, j: usize) -> f64 {
        let r = 2.0 * self.off.abs();
        let mut lo = self.diag.iter().fold(f64::INFINITY, |m, &d| m.min(d - r));
        let mut hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d + r));
        while hi - lo > 1e-13 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector by inverse iteration at a slightly perturbed shift.
    fn eigenvector(&self, mu: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = mu + 1e-10 * mu.abs().max(1.0);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i as f64) * 0.37).sin()).collect();
        for _ in 0..3 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let e = self.off;
        let mut piv = self.diag[0] - shift;
        c[0] = e / piv;
        d[0] = rhs[0] / piv;
        for i in 1..n {
            piv = self.diag[i] - shift - e * c[i - 1];
            if piv == 0.0 {
                piv = f64::EPSILON;
            }
            c[i] = e / piv;
            d[i] = (rhs[i] - e * d[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

/// Lowest k eigenvalues on `domain` (default per potential) with `n_grid`
/// interior points.
pub fn fd_eigs_1d(potential: &Potential1d, domain_: Option<(f64, f64)>, n_grid: usize, k: usize) -> Result<FdResult> {
    if n_grid < 100 {
        return Err(domain("n_grid must be at least 100"));
    }
    if k == 0 || k > n_grid {
        return Err(domain("k must lie in 1..=n_grid"));
    }
    let (a, b) = match domain_ {
        Some(d) => d,
        None => potential.default_domain()?,
    };
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(domain(format!("bad domain [{a}, {b}]")));
    }
    let h = (b - a) / (n_grid + 1) as f64;
    let h2 = h * h;
    let diag = (1..=n_grid).map(|i| 2.0 / h2 + potential.eval(a + i as f64 * h)).collect();
    let m = Tridiag { diag, off: -1.0 / h2 };
    let eigs: Vec<f64> = (0..k).map(|j| m.eigenvalue(j)).collect();
    let edge = (0.05 * n_grid as f64).ceil() as usize;
    let edge_mass: Vec<f64> = eigs
        .iter()
        .map(|&mu| {
            let v = m.eigenvector(mu);
            v[..edge].iter().chain(&v[n_grid - edge..]).map(|x| x * x).sum()
        })
        .collect();
    let truncated = !matches!(potential, Potential1d::Problem2 { .. });
    let truncation_warning = truncated && edge_mass.iter().any(|&e| e > EDGE_MASS_LIMIT);
    Ok(FdResult { eigs, edge_mass, truncation_warning })
}
