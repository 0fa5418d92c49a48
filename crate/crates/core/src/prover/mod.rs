//! The separation proof: U from the Rayleigh–Ritz sweep, L from the Airy
//! bound transferred to t ≤ t₀, verdict U < L.

mod certificate;

use serde::{Deserialize, Serialize};

use crate::airy_lower::{self, certify_no_crossing, eval_fs, isolate_positive_roots, mu_bar_bound, mu_kappa_factor};
use crate::error::{domain, Error, Result};
use crate::geometry::t0_enclosure;
use crate::interval::{pi_enclosure, Interval};
use crate::ritz::{algorithm1_sweep_with, upper_bound_on, RitzConfig, UpperBoundResult};

pub use certificate::{
    verify_certificate, CertConfig, CertSubinterval, PositivitySummary, ProofCertificate, Provenance, StageError,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Proven,
    NotProven,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProofConfig {
    pub n_basis: usize,
    pub n_s: usize,
    pub t0: Interval,
    pub quad_target: f64,
    pub kappa_box: Interval,
    pub threshold_mu: f64,
    pub apex_function: bool,
    pub refine_above: f64,
    pub max_refine_depth: u32,
    /// Bisection depth allowed in the no-crossing sweep.
    pub positivity_depth: u32,
}

impl Default for ProofConfig {
    fn default() -> Self {
        let r = RitzConfig::default();
        ProofConfig {
            n_basis: r.n_basis,
            n_s: 100,
            t0: t0_enclosure(),
            quad_target: r.quad_target,
            kappa_box: Interval::new(3.2174, 3.2175).expect("ordered"),
            threshold_mu: 23.5,
            apex_function: r.apex_function,
            refine_above: r.refine_above,
            max_refine_depth: r.max_refine_depth,
            positivity_depth: 30,
        }
    }
}

impl ProofConfig {
    /// Sets the threshold on μ̄₃ and a κ-box of width 10⁻⁴ whose lower end is
    /// threshold/(2π²)^{2/3}, rounded up.
    pub fn with_threshold(mut self, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain(format!("threshold {mu} must be positive")));
        }
        let k = (Interval::point(mu) / mu_kappa_factor()).hi();
        self.threshold_mu = mu;
        self.kappa_box = Interval::new(k, k + 1e-4)?;
        Ok(self)
    }

    pub fn ritz(&self) -> RitzConfig {
        RitzConfig {
            n_basis: self.n_basis,
            apex_function: self.apex_function,
            quad_target: self.quad_target,
            refine_above: self.refine_above,
            max_refine_depth: self.max_refine_depth,
            ..RitzConfig::default()
        }
    }
}

/// t₀^{2/3}/(3π²)
fn transfer_coefficient(t0: Interval) -> Result<Interval> {
    Ok(t0.pow_rational(2, 3)? / (pi_enclosure().sqr() * 3.0))
}

/// Enclosure of μ̄/(1 + t₀^{2/3}μ̄/(3π²)), evaluated as 1/(1/μ̄ + c) so that
/// the map stays monotone in both arguments.
pub fn lower_transfer(mu_bar: Interval, t0: Interval) -> Result<Interval> {
    if mu_bar.lo() <= 0.0 || t0.lo() <= 0.0 {
        return Err(domain("lower_transfer needs mu_bar > 0 and t0 > 0"));
    }
    Ok((mu_bar.recip() + transfer_coefficient(t0)?).recip())
}

/// λ = t^{−4/3}μ + π²/t².
pub fn lambda_from_mu(mu: Interval, t: Interval) -> Result<Interval> {
    if t.lo() <= 0.0 {
        return Err(domain("t must be positive"));
    }
    Ok(mu / t.pow_rational(4, 3)? + pi_enclosure().sqr() / t.sqr())
}

/// μ = t^{4/3}(λ − π²/t²).
pub fn mu_from_lambda(lambda: Interval, t: Interval) -> Result<Interval> {
    if t.lo() <= 0.0 {
        return Err(domain("t must be positive"));
    }
    Ok(t.pow_rational(4, 3)? * (lambda - pi_enclosure().sqr() / t.sqr()))
}

/// Certified facts of the Airy step.
#[derive(Clone, Debug, PartialEq)]
pub struct AiryStep {
    pub kappa3_zero: Interval,
    pub positivity: airy_lower::PositivityCertificate,
    /// Certified lower bound on μ̄₃(s), s ∈ [0,1].
    pub mu_bar3_lower: f64,
}

/// κ₃(0) must lie above the box and f_s must stay positive on it; by
/// continuity of κ₃ this gives κ₃(s) > kappa_box.hi on [0,1].
pub fn airy_step(cfg: &ProofConfig) -> Result<AiryStep> {
    let roots = isolate_positive_roots(Interval::ZERO, 3.5)?;
    let k3 = roots.get(2).ok_or_else(|| Error::CheckFailed("fewer than three roots at s = 0".into()))?.root;
    if !(k3.lo() > cfg.kappa_box.hi()) {
        return Err(Error::CheckFailed(format!("kappa_3(0) = {k3:?} does not lie above the box {:?}", cfg.kappa_box)));
    }
    let positivity = certify_no_crossing(cfg.kappa_box, cfg.positivity_depth)?;
    let mu_bar3_lower = mu_bar_bound(cfg.kappa_box.hi())?.lo();
    if mu_bar3_lower < cfg.threshold_mu {
        return Err(Error::CheckFailed(format!("mu_bar_3 >= {mu_bar3_lower} is below the threshold {}", cfg.threshold_mu)));
    }
    Ok(AiryStep { kappa3_zero: k3, positivity, mu_bar3_lower })
}

pub fn prove_separation(cfg: &ProofConfig) -> ProofCertificate {
    let started = certificate::now();
    let mut cert = ProofCertificate::skeleton(cfg, started);
    // the Airy step is cheap, so a bad threshold fails before the sweep
    let airy = match airy_step(cfg) {
        Ok(a) => a,
        Err(e) => return cert.fail("airy", e),
    };
    cert.set_airy(&airy);
    let sweep = match algorithm1_sweep_with(&cfg.ritz(), cfg.n_s, cfg.t0) {
        Ok(s) => s,
        Err(e) => return cert.fail("upper", e),
    };
    cert.set_upper(&sweep);
    let l = match lower_transfer(Interval::point(cfg.threshold_mu), cfg.t0) {
        Ok(l) => l.lo(),
        Err(e) => return cert.fail("transfer", e),
    };
    cert.finish(l, sweep.u < l)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub s: f64,
    /// Certified bound on μ̂₂^{t₀}(s) (None when certification failed).
    pub mu_hat2_upper: Option<f64>,
    pub mu_bar3: Option<Interval>,
    pub mu3_transferred_lo: Option<f64>,
}

/// Per-point curves for s = i/(grid−1): certified μ̂₂ upper bound, μ̄₃ from
/// the isolated third root, and its transferred lower bound.
pub fn scan_curves(grid: usize, cfg: &ProofConfig) -> Result<Vec<CurveRow>> {
    if grid < 2 {
        return Err(domain("grid needs at least two points"));
    }
    use rayon::prelude::*;
    let ritz = cfg.ritz();
    Ok((0..grid)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 / (grid - 1) as f64;
            let upper = upper_bound_on(Interval::point(s), cfg.t0, &ritz).ok().map(|r: UpperBoundResult| r.upper);
            let mu_bar3 = isolate_positive_roots(Interval::point(s), airy_lower::KAPPA_MAX)
                .ok()
                .and_then(|r| r.get(2).map(|e| mu_kappa_factor() * e.root));
            let lo = mu_bar3.and_then(|m| lower_transfer(m, cfg.t0).ok()).map(|l| l.lo());
            CurveRow { s, mu_hat2_upper: upper, mu_bar3, mu3_transferred_lo: lo }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AiryRow {
    pub kappa: f64,
    pub f_mid: f64,
    pub f_width: f64,
}

/// f_s on `steps` equally spaced κ in `kappa_range` (both ends included).
pub fn airy_scan(s: f64, kappa_range: Interval, steps: usize) -> Result<Vec<AiryRow>> {
    if steps < 2 {
        return Err(domain("airy scan needs at least two steps"));
    }
    let (a, b) = (kappa_range.lo(), kappa_range.hi());
    (0..steps)
        .map(|i| {
            let kappa = if i + 1 == steps { b } else { a + (b - a) * i as f64 / (steps - 1) as f64 };
            let f = eval_fs(Interval::point(s), Interval::point(kappa))?;
            Ok(AiryRow { kappa, f_mid: f.mid(), f_width: f.width() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transfer_values() {
        let l = lower_transfer(Interval::point(23.5), t0_enclosure()).unwrap();
        assert!(l.contains(21.1492537676777584) && l.width() < 1e-12);
        let small = lower_transfer(Interval::point(1e-9), t0_enclosure()).unwrap();
        assert!((small.mid() - 1e-9).abs() < 1e-17);
    }

    #[test]
    fn lambda_mu_roundtrip() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!(lambda_from_mu(Interval::ZERO, Interval::ONE).unwrap().contains(pi2));
        let t = t0_enclosure();
        let mu = Interval::point(21.15);
        let back = mu_from_lambda(lambda_from_mu(mu, t).unwrap(), t).unwrap();
        assert!(back.contains(21.15) && back.width() < 1e-9);
        assert!(lambda_from_mu(mu, Interval::ZERO).is_err());
    }

    #[test]
    fn threshold_box() {
        let c = ProofConfig::default().with_threshold(30.0).unwrap();
        assert!((c.kappa_box.lo() - 4.10741).abs() < 1e-4);
        assert!(matches!(airy_step(&c), Err(Error::CheckFailed(_))));
    }
}
