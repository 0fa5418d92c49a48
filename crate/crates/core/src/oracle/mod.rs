//! Plain floating-point reference solvers used to cross-check the certified
//! quantities. Nothing here is rigorous.

mod fd;
mod fem;

use serde::Serialize;

use crate::airy_lower::{isolate_positive_roots, mu_kappa_factor, KAPPA_MAX};
use crate::error::{domain, Error, Result};
use crate::geometry::t0_enclosure;
use crate::interval::Interval;
use crate::prover::{ProofCertificate, Verdict};

pub use fd::{fd_eigs_1d, FdResult, Potential1d, EDGE_MASS_LIMIT, PROBLEM3_HALF_WIDTH};
pub use fem::{fem_triangle_eigs, FemResult, TriangleMesh};

/// μ = t^{4/3}(λ − π²/t²) in plain floating point.
pub fn mu_of_lambda(lambda: f64, t: f64) -> f64 {
    t.powf(4.0 / 3.0) * (lambda - std::f64::consts::PI.powi(2) / (t * t))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub s: f64,
    pub t: f64,
    pub level: u32,
    pub lambda2: f64,
    pub lambda3: f64,
    /// Richardson-extrapolated μ₂, μ₃ and their discretization estimates.
    pub mu2: f64,
    pub mu3: f64,
    pub tol2: f64,
    pub tol3: f64,
    pub upper: f64,
    pub lower: f64,
    pub ill_conditioned: bool,
}

/// FEM λ₂, λ₃ at (s,t) ∈ Ω_down against the certificate: μ₂ ≤ U + tol and
/// μ₃ ≥ L − tol, tol from the difference of levels `level−1` and `level`.
pub fn cross_check_sandwich(s: f64, t: f64, cert: &ProofCertificate, level: u32) -> Result<SandwichReport> {
    let t0 = t0_enclosure().lo();
    if !((0.0..1.0).contains(&s) && t > 0.0 && t <= t0) {
        return Err(domain(format!("({s}, {t}) is outside the lower moduli region")));
    }
    if cert.verdict != Verdict::Proven {
        return Err(domain("certificate is not a proof"));
    }
    let (upper, lower) = match (cert.upper(), cert.lower()) {
        (Some(u), Some(l)) => (u, l),
        _ => return Err(Error::Certificate("missing U or L".into())),
    };
    if level < 4 {
        return Err(domain("sandwich check needs level ≥ 4"));
    }
    let fine = fem_triangle_eigs(s, t, level, 3)?;
    let coarse = fem_triangle_eigs(s, t, level - 1, 3)?;
    // second order in h: error ≈ (coarse − fine)/3
    let mu = |r: &FemResult, k: usize| mu_of_lambda(r.eigs[k], t);
    let extrap = |k: usize| mu(&fine, k) - (mu(&coarse, k) - mu(&fine, k)) / 3.0;
    let tol = |k: usize| (mu(&coarse, k) - mu(&fine, k)).abs() / 3.0 + 1e-9;
    let rep = SandwichReport {
        s,
        t,
        level,
        lambda2: fine.eigs[1],
        lambda3: fine.eigs[2],
        mu2: extrap(1),
        mu3: extrap(2),
        tol2: tol(1),
        tol3: tol(2),
        upper,
        lower,
        ill_conditioned: fine.ill_conditioned,
    };
    if rep.mu2 > upper + rep.tol2 || rep.mu3 < lower - rep.tol3 {
        return Err(Error::CheckFailed(format!(
            "mu2 = {} (tol {}) vs U = {upper}; mu3 = {} (tol {}) vs L = {lower}",
            rep.mu2, rep.tol2, rep.mu3, rep.tol3
        )));
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub s: f64,
    pub fd: f64,
    pub airy: f64,
    pub rel_dev: f64,
}

pub const SCALING_S: [f64; 3] = [0.0, 0.25, 0.5];

/// FD eigenvalue k of the limit problem against (2π²)^{2/3}κ_k(s).
pub fn cross_check_scaling(k: usize) -> Result<Vec<ScalingRow>> {
    if !(1..=3).contains(&k) {
        return Err(domain("k must lie in 1..=3"));
    }
    let factor = mu_kappa_factor().mid();
    let mut rows = Vec::new();
    for s in SCALING_S {
        let fd = fd_eigs_1d(&Potential1d::Problem3 { s }, None, 8000, k)?.eigs[k - 1];
        let roots = isolate_positive_roots(Interval::point(s), KAPPA_MAX)?;
        let kappa = roots.get(k - 1).ok_or_else(|| Error::CheckFailed(format!("fewer than {k} roots at s = {s}")))?;
        let airy = factor * kappa.root.mid();
        let rel_dev = (fd - airy).abs() / airy;
        if rel_dev > 1e-3 {
            return Err(Error::CheckFailed(format!("s = {s}: FD {fd} vs Airy {airy}")));
        }
        rows.push(ScalingRow { s, fd, airy, rel_dev });
    }
    Ok(rows)
}
