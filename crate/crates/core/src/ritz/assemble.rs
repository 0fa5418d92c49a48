//! Interval and floating-point assembly of Rayleigh–Ritz pencils.
//!
//! The s-dependence over a subinterval J is handled by a second-order Taylor
//! form around a point s_m ∈ J rather than by evaluating the potential on J
//! pointwise: the potential integral
//!
//!   I(s) = ∫₀^{u*(s)} W_l(u,s) g(u) du + ∫_{u*(s)}^1 W_r(u,s) h(u) du
//!
//! has the derivative
//!
//!   I′(s) = 2π²T³ [(1+s) ∫₀^{u*} g − (1−s) ∫_{u*}^1 h] + ½ c (g − h)(u*),
//!
//! because ∂_s W_l = 2π²T³(1+s), ∂_s W_r = −2π²T³(1−s) and W_l = W_r = c at
//! the apex. Left and right contributions of opposite sign cancel inside I′,
//! which a pointwise hull over J cannot see. Differentiating once more,
//!
//!   I″(s) = 2π²T³ [∫₀^{u*} g + ∫_{u*}^1 h + ½(1+s) g(u*) + ½(1−s) h(u*)]
//!           + ¼ c (g′ − h′)(u*),
//!
//! and I(J) ⊆ I(s_m) + I′(s_m)(J − s_m) + ½ I″(J)(J − s_m)². g and h are
//! continuous at the clamp of the apex function, so I′ is Lipschitz even when
//! u* crosses it.
//!
//! Integrals over u use the Taylor-model rule of
//! [`integrate_taylor_many`](crate::interval::integrate_taylor_many).

use serde::{Deserialize, Serialize};

use super::{apex_hull, RitzConfig, Scale, TrialBasis};
use crate::error::{domain, Result};
use crate::interval::{integrate_taylor_many, subdivide, Interval, QuadOptions, Taylor};
use crate::linalg::{gauss_legendre, Mat};

/// Symmetric interval pencil (A, B) over the trial basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalPencil {
    pub s_interval: Interval,
    pub a: Vec<Vec<Interval>>,
    pub b: Vec<Vec<Interval>>,
    /// Largest entry width.
    pub assembly_width: f64,
    pub budget_exceeded: bool,
}

impl IntervalPencil {
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn mid(&self) -> (Mat, Mat) {
        let n = self.dim();
        (Mat::from_fn(n, |i, j| self.a[i][j].mid()), Mat::from_fn(n, |i, j| self.b[i][j].mid()))
    }
}

/// The 2×2 pencil (WᵀAW, WᵀBW) over the span of two seed vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedPencil {
    pub a: [[Interval; 2]; 2],
    pub b: [[Interval; 2]; 2],
    pub panels: usize,
    pub budget_exceeded: bool,
}

/// Taylor coefficients carried through the integrands (degree-6 remainder).
const ORDER: usize = 7;
type Tm = Taylor<ORDER>;

/// Pieces per side for range enclosures on the apex hull.
const HULL_PIECES: usize = 4;

#[inline]
fn cst(x: f64) -> Interval {
    Interval::point(x)
}

/// Function families evaluated at a point: Q, D = Q + uQ′ and R = uE, for
/// either the raw basis or linear combinations of it.
struct Evaluator<'a> {
    sc: Scale,
    gammas: &'a [Interval],
    clamp: Option<Interval>,
    weights: Option<&'a [Vec<f64>]>,
    bq: Vec<Tm>,
    bd: Vec<Tm>,
    br: Vec<Tm>,
    q: Vec<Tm>,
    d: Vec<Tm>,
    r: Vec<Tm>,
}

impl<'a> Evaluator<'a> {
    fn new(sc: Scale, basis: &'a TrialBasis, weights: Option<&'a [Vec<f64>]>) -> Self {
        let dim = basis.dim();
        let k = weights.map_or(dim, |w| w.len());
        let z = Tm::ZERO;
        Evaluator {
            sc,
            gammas: &basis.ref_centers,
            clamp: basis.apex_clamp.map(cst),
            weights,
            bq: vec![z; dim],
            bd: vec![z; dim],
            br: vec![z; dim],
            q: vec![z; k],
            d: vec![z; k],
            r: vec![z; k],
        }
    }

    fn families(&self) -> usize {
        self.q.len()
    }

    fn eval(&mut self, u: Tm, apex_active: bool) {
        let l2 = self.sc.l2;
        let two_l2 = l2 * 2.0;
        let u_minus_1 = u - Interval::ONE;
        let two_u_minus_1 = u.scale(cst(2.0)) - Interval::ONE;
        let uu1 = u * u_minus_1;
        for (j, &g) in self.gammas.iter().enumerate() {
            let diff = u - g;
            let e = diff.sqr().scale(-l2).exp();
            self.bq[j] = u_minus_1 * e;
            self.bd[j] = (two_u_minus_1 - (uu1 * diff).scale(two_l2)) * e;
            self.br[j] = u * e;
        }
        if let Some(uc) = self.clamp {
            let j = self.gammas.len();
            if apex_active {
                let diff = u - uc;
                let sq = diff.sqr();
                let f = sq.scale(-l2).exp();
                self.bq[j] = diff * f;
                self.bd[j] = (u.scale(cst(2.0)) - uc - (u * sq).scale(two_l2)) * f;
                // −φ/(L²(1−u)); only used right of the apex, where u < u_c < 1
                self.br[j] = -(u * self.bq[j]) * (Tm::constant(Interval::ONE) - u).recip();
            } else {
                self.bq[j] = Tm::ZERO;
                self.bd[j] = Tm::ZERO;
                self.br[j] = Tm::ZERO;
            }
        }
        match self.weights {
            None => {
                self.q.copy_from_slice(&self.bq);
                self.d.copy_from_slice(&self.bd);
                self.r.copy_from_slice(&self.br);
            }
            Some(w) => {
                for (a, wa) in w.iter().enumerate() {
                    let (mut q, mut d, mut r) = (Tm::ZERO, Tm::ZERO, Tm::ZERO);
                    for (j, &c) in wa.iter().enumerate() {
                        if c == 0.0 {
                            continue;
                        }
                        let c = cst(c);
                        q = q + self.bq[j].scale(c);
                        d = d + self.bd[j].scale(c);
                        r = r + self.br[j].scale(c);
                    }
                    self.q[a] = q;
                    self.d[a] = d;
                    self.r[a] = r;
                }
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// One integration region: which potential form applies, whether the apex
/// function is active, and whether the auxiliary ∫g / ∫h is needed.
#[derive(Clone, Copy)]
struct Region {
    dom: Interval,
    side: Side,
    apex: bool,
    aux: bool,
}

/// Per-pair integrals: mass, kinetic, potential at s_m, auxiliary.
struct Sums {
    mass: Vec<Interval>,
    kin: Vec<Interval>,
    pot: Vec<Interval>,
    g: Vec<Interval>,
    h: Vec<Interval>,
    panels: usize,
    budget_exceeded: bool,
}

fn pairs(k: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(k * (k + 1) / 2);
    for a in 0..k {
        for b in a..k {
            v.push((a, b));
        }
    }
    v
}

/// W_l(u; s) = π²T(T²(1+s)² − L²u²) + c as a jet in u.
fn w_left(sc: &Scale, s: Interval, u: Tm) -> Tm {
    let k = sc.pi2t * sc.t2 * (s + 1.0).sqr() + sc.c;
    (-u.sqr().scale(sc.pi2t * sc.l2)).add_const(k)
}

/// W_r(u; s) = π²T(T²(1−s)² − L²(1−u)²) + c as a jet in u.
fn w_right(sc: &Scale, s: Interval, u: Tm) -> Tm {
    let k = sc.pi2t * sc.t2 * (Interval::ONE - s).sqr() + sc.c;
    let v = Tm::constant(Interval::ONE) - u;
    (-v.sqr().scale(sc.pi2t * sc.l2)).add_const(k)
}

fn integrate_regions(ev: &mut Evaluator, regions: &[Region], s_m: Interval, opts: &QuadOptions) -> Result<Sums> {
    let pr = pairs(ev.families());
    let p = pr.len();
    let mut out = Sums {
        mass: vec![Interval::ZERO; p],
        kin: vec![Interval::ZERO; p],
        pot: vec![Interval::ZERO; p],
        g: vec![Interval::ZERO; p],
        h: vec![Interval::ZERO; p],
        panels: 0,
        budget_exceeded: false,
    };
    let sc = ev.sc;
    for reg in regions {
        if reg.dom.is_point() {
            continue;
        }
        let m = if reg.aux { 4 * p } else { 3 * p };
        let res = integrate_taylor_many(
            |u, dst| {
                ev.eval(u, reg.apex);
                let w = match reg.side {
                    Side::Left => w_left(&sc, s_m, u),
                    Side::Right => w_right(&sc, s_m, u),
                };
                let u2 = u.sqr().scale(sc.l2);
                for (i, &(a, b)) in pr.iter().enumerate() {
                    let qq = ev.q[a] * ev.q[b];
                    dst[i] = u2 * qq;
                    dst[p + i] = ev.d[a] * ev.d[b];
                    let prod = match reg.side {
                        Side::Left => qq,
                        Side::Right => ev.r[a] * ev.r[b],
                    };
                    dst[2 * p + i] = w * prod;
                    if reg.aux {
                        dst[3 * p + i] = prod;
                    }
                }
                Ok(())
            },
            m,
            reg.dom,
            opts,
        )?;
        out.panels += res.panels;
        out.budget_exceeded |= res.budget_exceeded;
        for i in 0..p {
            out.mass[i] += res.values[i];
            out.kin[i] += res.values[p + i];
            out.pot[i] += res.values[2 * p + i];
            if reg.aux {
                match reg.side {
                    Side::Left => out.g[i] += res.values[3 * p + i],
                    Side::Right => out.h[i] += res.values[3 * p + i],
                }
            }
        }
    }
    Ok(out)
}

/// Expansion point in `s` with 1 + s_m exactly representable where possible.
fn expansion_point(s: Interval) -> f64 {
    let scale = (1u64 << 44) as f64;
    let m = (s.mid() * scale).round() / scale;
    if s.contains(m) {
        m
    } else {
        s.mid()
    }
}

/// Entry enclosures for all pairs (a ≤ b) of function families over s ∈ J.
struct Entries {
    a: Vec<Interval>,
    b: Vec<Interval>,
    panels: usize,
    budget_exceeded: bool,
}

fn assemble_entries(
    s: Interval,
    t0: Interval,
    basis: &TrialBasis,
    weights: Option<&[Vec<f64>]>,
    opts: &QuadOptions,
) -> Result<Entries> {
    if !(s.lo() >= 0.0 && s.hi() <= 1.0) {
        return Err(domain(format!("s-interval {s} not inside [0, 1]")));
    }
    if !(opts.target_width > 0.0) {
        return Err(domain("quadrature target must be positive"));
    }
    let sc = Scale::new(t0)?;
    let ustar = apex_hull(s);
    let u_c = basis.apex_clamp.unwrap_or(0.0);
    let s_m = expansion_point(s);
    let s_mi = cst(s_m);
    let u_m = (1.0 + s_m) * 0.5;
    let ustar_m = apex_hull(s_mi).hull(cst(u_m));
    let span = |a: f64, b: f64| Interval::new(a, b);

    // Scale the target from entry units to u-integral units; five regions
    // contribute to each entry.
    let mut opts = *opts;
    opts.target_width /= sc.l3.hi() * 5.0;

    // Breakpoints 0 ≤ U*.lo ≤ u_m ≤ U*.hi ≤ 1 plus the clamp u_c, which must
    // not fall inside the apex hull.
    let mut cuts = vec![0.0, ustar.lo(), u_m, ustar.hi(), 1.0];
    if basis.apex_clamp.is_some() {
        cuts.push(u_c);
    }
    cuts.sort_by(f64::total_cmp);
    let regions = cuts
        .windows(2)
        .map(|w| {
            Ok(Region {
                dom: span(w[0], w[1])?,
                side: if w[1] <= u_m { Side::Left } else { Side::Right },
                apex: w[1] <= u_c,
                aux: true,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ev = Evaluator::new(sc, basis, weights);
    let sums = integrate_regions(&mut ev, &regions, s_mi, &opts)?;
    let pr = pairs(ev.families());

    // Range values of g, h and their u-derivatives on apex hulls. g and h are
    // continuous across u_c (their derivatives jump), so a hull straddling the
    // clamp is covered piecewise.
    struct Hull {
        g: Vec<Interval>,
        h: Vec<Interval>,
        dg: Vec<Interval>,
        dh: Vec<Interval>,
    }
    let hull_at = |ev: &mut Evaluator, u: Interval| -> Result<Hull> {
        let sides = if basis.apex_clamp.is_some() && u.interior_contains(cst(u_c)) {
            vec![(Interval::new(u.lo(), u_c)?, true), (Interval::new(u_c, u.hi())?, false)]
        } else {
            vec![(u, u.hi() <= u_c)]
        };
        let pieces: Vec<(Interval, bool)> =
            sides.into_iter().flat_map(|(p, active)| subdivide(p, HULL_PIECES).into_iter().map(move |q| (q, active))).collect();
        let mut out = Hull { g: Vec::new(), h: Vec::new(), dg: Vec::new(), dh: Vec::new() };
        let mut centre = vec![(Tm::ZERO, Tm::ZERO); pr.len()];
        for (k, (piece, active)) in pieces.into_iter().enumerate() {
            // Taylor form about the midpoint, intersected with the naive
            // range (seed combinations cancel heavily)
            let c = piece.mid();
            ev.eval(Tm::variable(cst(c)), active);
            for (i, &(a, b)) in pr.iter().enumerate() {
                centre[i] = (ev.q[a] * ev.q[b], ev.r[a] * ev.r[b]);
            }
            ev.eval(Tm::variable(piece), active);
            let r = piece - c;
            for (i, &(a, b)) in pr.iter().enumerate() {
                let (gc, hc) = &centre[i];
                let g = ev.q[a] * ev.q[b];
                let h = ev.r[a] * ev.r[b];
                let tighten = |naive: Interval, taylor: Interval| naive.intersect(taylor).unwrap_or(taylor);
                let gv = tighten(g.value(), Tm::eval_offset(gc, &g, r));
                let hv = tighten(h.value(), Tm::eval_offset(hc, &h, r));
                let dgv = tighten(g.c[1], Tm::eval_offset_d1(gc, &g, r));
                let dhv = tighten(h.c[1], Tm::eval_offset_d1(hc, &h, r));
                if k == 0 {
                    out.g.push(gv);
                    out.h.push(hv);
                    out.dg.push(dgv);
                    out.dh.push(dhv);
                } else {
                    out.g[i] = out.g[i].hull(gv);
                    out.h[i] = out.h[i].hull(hv);
                    out.dg[i] = out.dg[i].hull(dgv);
                    out.dh[i] = out.dh[i].hull(dhv);
                }
            }
        }
        Ok(out)
    };
    let star = hull_at(&mut ev, ustar)?;
    let at_m = hull_at(&mut ev, ustar_m)?;
    let uj_m = Tm::variable(ustar_m);
    let wl_m = w_left(&sc, s_mi, uj_m).value();
    let wr_m = w_right(&sc, s_mi, uj_m).value();
    // signed lengths u*(s_m) − u_m and u*(s) − u*(s_m), s ∈ J
    let corr_len = apex_hull(s_mi) - u_m;
    let shift = ustar - apex_hull(s_mi);

    // I(s) ∈ I(s_m) + I′(s_m)(s − s_m) + ½ I″(J)(s − s_m)²
    let k = sc.pi2t * sc.t2 * 2.0;
    let half_c = sc.c * 0.5;
    let ds = s - s_m;
    let ds2 = ds.sqr();

    let mut a = Vec::with_capacity(pr.len());
    let mut b = Vec::with_capacity(pr.len());
    for i in 0..pr.len() {
        let g_m = sums.g[i] + corr_len * at_m.g[i];
        let h_m = sums.h[i] - corr_len * at_m.h[i];
        let g_j = g_m + shift * star.g[i];
        let h_j = h_m - shift * star.h[i];
        let pot_m = sums.pot[i] + corr_len * (wl_m * at_m.g[i] - wr_m * at_m.h[i]);
        let d1 = k * ((s_mi + 1.0) * g_m - (Interval::ONE - s_mi) * h_m) + half_c * (at_m.g[i] - at_m.h[i]);
        let d2 = k * (g_j + h_j + (s + 1.0) * star.g[i] * 0.5 + (Interval::ONE - s) * star.h[i] * 0.5)
            + half_c * 0.5 * (star.dg[i] - star.dh[i]);
        let pot = pot_m + d1 * ds + d2 * ds2 * 0.5;
        a.push(sc.l3 * (sums.kin[i] + pot));
        b.push(sc.l3 * sums.mass[i]);
    }
    Ok(Entries { a, b, panels: sums.panels, budget_exceeded: sums.budget_exceeded })
}

/// Interval pencil over the full trial basis, valid for every s ∈ `s`.
pub fn assemble_pencil(s: Interval, t0: Interval, basis: &TrialBasis, quad_target: f64) -> Result<IntervalPencil> {
    let opts = QuadOptions { target_width: quad_target, ..QuadOptions::default() };
    assemble_pencil_with(s, t0, basis, &opts)
}

pub fn assemble_pencil_with(s: Interval, t0: Interval, basis: &TrialBasis, opts: &QuadOptions) -> Result<IntervalPencil> {
    let e = assemble_entries(s, t0, basis, None, opts)?;
    let n = basis.dim();
    let mut a = vec![vec![Interval::ZERO; n]; n];
    let mut b = vec![vec![Interval::ZERO; n]; n];
    let mut width = 0.0f64;
    for (i, (p, q)) in pairs(n).into_iter().enumerate() {
        a[p][q] = e.a[i];
        a[q][p] = e.a[i];
        b[p][q] = e.b[i];
        b[q][p] = e.b[i];
        width = width.max(e.a[i].width()).max(e.b[i].width());
    }
    Ok(IntervalPencil { s_interval: s, a, b, assembly_width: width, budget_exceeded: e.budget_exceeded })
}

/// Reduced pencil over span{Wᵀ[0], Wᵀ[1]}: the seed combinations are formed
/// inside the integrand, so no n×n interval products are needed.
pub fn reduced_pencil(
    s: Interval,
    t0: Interval,
    basis: &TrialBasis,
    seeds: &[Vec<f64>; 2],
    cfg: &RitzConfig,
) -> Result<ReducedPencil> {
    if seeds.iter().any(|w| w.len() != basis.dim()) {
        return Err(domain("seed length does not match the basis"));
    }
    let e = assemble_entries(s, t0, basis, Some(&seeds[..]), &cfg.quad())?;
    // pairs(2) = (0,0), (0,1), (1,1)
    Ok(ReducedPencil {
        a: [[e.a[0], e.a[1]], [e.a[1], e.a[2]]],
        b: [[e.b[0], e.b[1]], [e.b[1], e.b[2]]],
        panels: e.panels,
        budget_exceeded: e.budget_exceeded,
    })
}

/// Floating-point pencil at a single s (composite Gauss–Legendre).
pub fn assemble_float_pencil(s: f64, t0: f64, basis: &TrialBasis) -> Result<(Mat, Mat)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(domain(format!("s = {s} not inside [0, 1]")));
    }
    let big_t = t0.powf(-2.0 / 3.0);
    let l = 2.0 * big_t;
    let l2 = l * l;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let c = (3.0 + 4.0 * pi2) / 12.0;
    let ustar = 0.5 * (1.0 + s);
    let u_c = basis.apex_clamp.unwrap_or(0.0);
    let gam: Vec<f64> = basis.ref_centers.iter().map(|g| g.mid()).collect();
    let n = basis.dim();
    let (xg, wg) = gauss_legendre(8);
    let mut a = Mat::zeros(n);
    let mut b = Mat::zeros(n);
    let mut q = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut cuts = [0.0, u_c, ustar, 1.0];
    cuts.sort_by(f64::total_cmp);
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let panels = ((hi - lo) / 0.01).ceil().max(1.0) as usize;
        let h = (hi - lo) / panels as f64;
        for p in 0..panels {
            let a0 = lo + p as f64 * h;
            for (&x, &w) in xg.iter().zip(&wg) {
                let u = a0 + 0.5 * h * (x + 1.0);
                let w = 0.5 * h * w;
                let left = u < ustar;
                for (j, &g) in gam.iter().enumerate() {
                    let e = (-l2 * (u - g) * (u - g)).exp();
                    q[j] = (u - 1.0) * e;
                    d[j] = e * ((2.0 * u - 1.0) - 2.0 * l2 * u * (u - 1.0) * (u - g));
                    r[j] = u * e;
                }
                if let Some(uc) = basis.apex_clamp {
                    let j = gam.len();
                    if u < uc {
                        let f = (-l2 * (u - uc) * (u - uc)).exp();
                        q[j] = (u - uc) * f;
                        d[j] = f * ((2.0 * u - uc) - 2.0 * l2 * u * (u - uc) * (u - uc));
                        r[j] = -u * q[j] / (1.0 - u);
                    } else {
                        q[j] = 0.0;
                        d[j] = 0.0;
                        r[j] = 0.0;
                    }
                }
                let wpot = if left {
                    pi2 * big_t * (big_t * big_t * (1.0 + s).powi(2) - l2 * u * u) + c
                } else {
                    pi2 * big_t * (big_t * big_t * (1.0 - s).powi(2) - l2 * (1.0 - u).powi(2)) + c
                };
                for i in 0..n {
                    for k in i..n {
                        let pot = if left { wpot * q[i] * q[k] } else { wpot * r[i] * r[k] };
                        a[(i, k)] += w * (d[i] * d[k] + pot);
                        b[(i, k)] += w * l2 * u * u * q[i] * q[k];
                    }
                }
            }
        }
    }
    let l3 = l * l2;
    for i in 0..n {
        for k in i..n {
            a[(i, k)] *= l3;
            b[(i, k)] *= l3;
            a[(k, i)] = a[(i, k)];
            b[(k, i)] = b[(i, k)];
        }
    }
    Ok((a, b))
}
