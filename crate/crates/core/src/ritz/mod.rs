//! Certified Rayleigh–Ritz upper bounds for the second eigenvalue of
//!
//!   −u″ + V(t₀,x) u = μ u  on Iᵗ⁰ = [a_l, a_r],  u(a_l) = u(a_r) = 0.
//!
//! Everything is computed on the reference variable u ∈ [0,1],
//! x = a_l + L u with L = a_r − a_l = 2t₀^{−2/3}. In this variable the Gaussian
//! trial functions do not depend on s; s enters only through the potential and
//! the location u* = (1+s)/2 of the apex.
//!
//! Writing every trial function as φ = L² u Q(u), all pencil entries become L³
//! times integrals over u of
//!
//!   mass       L² (uQ_j)(uQ_k)
//!   kinetic    D_j D_k,                 D = Q + uQ′
//!   potential  W_l(u) Q_j Q_k           (u ≤ u*)
//!              W_r(u) (uE_j)(uE_k)      (u ≥ u*, Gaussians only)
//!
//! where W_l = V·(x−a_l)² = π²T(T²(1+s)² − L²u²) + c and
//! W_r = V·(a_r−x)² = π²T(T²(1−s)² − L²(1−u)²) + c, c = (3+4π²)/12. The
//! 1/(x−a)² singularities of V are thereby cancelled before any interval
//! evaluation.

mod assemble;
mod certify;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{scaled_interval, slope_coefficient, ScaledInterval, TriangleParams};
use crate::interval::{pi_enclosure, Interval, QuadOptions};

pub use assemble::{assemble_float_pencil, assemble_pencil, assemble_pencil_with, reduced_pencil, IntervalPencil, ReducedPencil};
pub use certify::{
    algorithm1_sweep, algorithm1_sweep_with, approx_spectrum, certified_upper_mu2, certify_reduced, upper_bound_on,
    SweepResult, UpperBoundResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RitzConfig {
    /// Number N of Gaussian trial functions.
    pub n_basis: usize,
    /// Add one trial function clamped at the apex (see [`TrialBasis`]).
    pub apex_function: bool,
    /// Bound on the summed quadrature-remainder width per entry.
    pub quad_target: f64,
    /// Panel budget per integration region.
    pub max_panels: usize,
    /// Subintervals whose bound exceeds this are bisected ...
    pub refine_above: f64,
    /// ... at most this many times.
    pub max_refine_depth: u32,
}

impl Default for RitzConfig {
    fn default() -> Self {
        RitzConfig { n_basis: 17, apex_function: true, quad_target: 1e-6, max_panels: 1 << 14, refine_above: 21.0, max_refine_depth: 4 }
    }
}

impl RitzConfig {
    pub(crate) fn quad(&self) -> QuadOptions {
        QuadOptions { target_width: self.quad_target, max_panels: self.max_panels, initial_panels: 8 }
    }
}

/// Gaussian trial functions φ_i(x) = (x−a_l)(x−a_r) exp(−(x−c_i)²) with
/// c_i = ((N−i)a_l + (i+N−2)a_r) / (2(N−1)), i = 1..N, optionally augmented by
///
///   ψ(x) = (x−a_l)(x−x_c) exp(−(x−x_c)²) for x ≤ x_c, 0 beyond,
///
/// clamped at x_c = a_l + L u_c, 0 < u_c < 1. The Gaussian centres all lie in
/// [midpoint, a_r] and cannot produce the steep drop to zero just right of the
/// apex when s is close to 1; ψ can.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialBasis {
    pub n: usize,
    pub centers: Vec<Interval>,
    /// Centres in the reference variable: γ_i = (i+N−2)/(2(N−1)).
    pub ref_centers: Vec<Interval>,
    pub endpoints: ScaledInterval,
    /// Clamp point u_c of the apex function, if present.
    pub apex_clamp: Option<f64>,
}

impl TrialBasis {
    /// Number of trial functions including the apex function.
    pub fn dim(&self) -> usize {
        self.n + usize::from(self.apex_clamp.is_some())
    }

    pub fn with_apex_clamp(mut self, u_c: f64) -> Result<Self> {
        if !(0.0 < u_c && u_c < 1.0) {
            return Err(domain(format!("apex clamp {u_c} outside (0, 1)")));
        }
        self.apex_clamp = Some(u_c);
        Ok(self)
    }
}

pub fn make_basis(endpoints: ScaledInterval, n: usize) -> Result<TrialBasis> {
    if n < 2 {
        return Err(domain("basis needs at least two functions"));
    }
    let den = Interval::point((2 * (n - 1)) as f64);
    let mut centers = Vec::with_capacity(n);
    let mut ref_centers = Vec::with_capacity(n);
    for i in 1..=n {
        let wl = Interval::point((n - i) as f64);
        let wr = Interval::point((i + n - 2) as f64);
        centers.push((wl * endpoints.a_left + wr * endpoints.a_right) / den);
        ref_centers.push(wr / den);
    }
    Ok(TrialBasis { n, centers, ref_centers, endpoints, apex_clamp: None })
}

/// The s-independent constants of the u-formulation for a given t.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Scale {
    pub l2: Interval,
    pub l3: Interval,
    /// π²T
    pub pi2t: Interval,
    /// T²
    pub t2: Interval,
    /// (3+4π²)/12
    pub c: Interval,
}

impl Scale {
    pub fn new(t: Interval) -> Result<Self> {
        let p = TriangleParams::new(Interval::ZERO, t)?;
        let big_t = p.big_t();
        let l = big_t * 2.0;
        Ok(Scale {

            l2: l.sqr(),
            l3: l.powi(3),
            pi2t: pi_enclosure().sqr() * big_t,
            t2: big_t.sqr(),
            c: slope_coefficient(),
        })
    }
}

/// Basis for the sweep: Gaussians from the point-s geometry (their reference
/// centres do not depend on s) plus the apex function clamped slightly right
/// of the apex hull of `s`.
pub fn sweep_basis(cfg: &RitzConfig, s: Interval, t0: Interval) -> Result<TrialBasis> {
    let p = TriangleParams::new(Interval::point(s.mid()), t0)?;
    let b = make_basis(scaled_interval(&p), cfg.n_basis)?;
    if cfg.apex_function {
        b.with_apex_clamp(apex_clamp_for(s))
    } else {
        Ok(b)
    }
}

/// Clamp point used by the sweep: 2·10⁻³ right of the apex hull, but at
/// most 1 − 1.5·10⁻³ (ψ must stay distinct from the Gaussian centred at a_r).
pub fn apex_clamp_for(s: Interval) -> f64 {
    (apex_hull(s).hi() + 2e-3).min(1.0 - 1.5e-3)
}

/// Enclosure of u* = (1+s)/2.
pub(crate) fn apex_hull(s: Interval) -> Interval {
    (s + 1.0) * 0.5
}
