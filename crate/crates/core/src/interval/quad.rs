//! Verified composite midpoint quadrature.
//!
//! On a panel J = [a, b] with (float) midpoint m, Taylor's theorem gives
//!
//!   ∫_J f ∈ f(m)|J| + f'(m)·∫_J (x−m) + f''(J)·∫_J (x−m)²/2,
//!
//! which reduces to the familiar f(m)|J| ± sup|f''|·|J|³/24 when m is the exact
//! midpoint, and stays rigorous when it is not. Only the last two terms shrink
//! under refinement; the width of f(m) itself (e.g. from interval-valued
//! parameters) is carried along but does not drive subdivision.

use super::taylor::Taylor;
use super::{Interval, Jet2};
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    /// Bound on the summed width of the remainder terms.
    pub target_width: f64,
    pub max_panels: usize,
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { target_width: 1e-6, max_panels: 1 << 14, initial_panels: 8 }
    }
}

impl QuadOptions {
    pub fn with_target(target_width: f64) -> Self {
        QuadOptions { target_width, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadResult {
    pub values: Vec<Interval>,
    pub panels: usize,
    /// Panel budget ran out before the target was met; values remain valid.
    pub budget_exceeded: bool,
}

impl QuadResult {
    pub fn value(&self) -> Interval {
        self.values[0]
    }
}

pub fn subdivide(x: Interval, n: usize) -> Vec<Interval> {
    let n = n.max(1);
    let (a, b) = (x.lo(), x.hi());
    let mut pts: Vec<f64> = (0..=n).map(|i| a + (b - a) * (i as f64 / n as f64)).collect();
    pts[0] = a;
    pts[n] = b;
    for i in 1..=n {
        if pts[i] < pts[i - 1] {
            pts[i] = pts[i - 1];
        }
    }
    pts.windows(2).map(|w| Interval::raw(w[0], w[1])).collect()
}

/// Single-integrand convenience wrapper with the default panel budget.
pub fn integrate_verified<F>(f: F, dom: Interval, target_width: f64) -> Result<QuadResult>
where
    F: Fn(Jet2) -> Result<Jet2>,
{
    integrate_verified_many(
        |x, out| {
            out[0] = f(x)?;
            Ok(())
        },
        1,
        dom,
        &QuadOptions::with_target(target_width),
    )
}

struct Panel {
    a: f64,
    b: f64,
    score: f64,
}

/// Integrates `m` integrands sharing one set of adaptively refined panels.
/// `f` writes the jets of all integrands at the given argument jet.
pub fn integrate_verified_many<F>(mut f: F, m: usize, dom: Interval, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(Jet2, &mut [Jet2]) -> Result<()>,
{
    if !(opts.target_width > 0.0) {
        return Err(domain("quadrature target width must be positive"));
    }
    if !dom.is_finite() {
        return Err(domain("quadrature domain must be finite"));
    }
    if dom.is_point() || m == 0 {
        return Ok(QuadResult { values: vec![Interval::ZERO; m], panels: 0, budget_exceeded: false });
    }
    let mut buf = vec![Jet2::constant(Interval::ZERO); m];
    let mut eval = |p: &Panel, vals: &mut [Interval], rems: &mut [Interval]| -> Result<()> {
        let mid = Interval::raw(p.a, p.b).mid();
        let h = Interval::point(p.b) - p.a;
        let r = Interval::point(p.b) - mid;
        let l = Interval::point(mid) - p.a;
        let d = (r.sqr() - l.sqr()) * 0.5;
        let k = (r.powi(3) + l.powi(3)) / 6.0;
        f(Jet2::variable(Interval::point(mid)), &mut buf)?;
        for c in 0..m {
            vals[c] = buf[c].value * h;
            rems[c] = buf[c].d1 * d;
        }
        f(Jet2::variable(Interval::raw(p.a, p.b)), &mut buf)?;
        for c in 0..m {
            rems[c] += buf[c].d2 * k;
        }
        Ok(())
    };

    let init = subdivide(dom, opts.initial_panels.max(1));
    let mut panels: Vec<Panel> = Vec::with_capacity(init.len());
    let mut vals: Vec<Interval> = Vec::new();
    let mut rems: Vec<Interval> = Vec::new();
    let mut v = vec![Interval::ZERO; m];
    let mut rm = vec![Interval::ZERO; m];
    let score = |rm: &[Interval]| rm.iter().map(|x| x.width()).fold(0.0, f64::max);
    for j in init {
        let mut p = Panel { a: j.lo(), b: j.hi(), score: 0.0 };
        eval(&p, &mut v, &mut rm)?;
        p.score = score(&rm);
        panels.push(p);
        vals.extend_from_slice(&v);
        rems.extend_from_slice(&rm);
    }

    let mut budget_exceeded = false;
    loop {
        let mut worst = 0.0f64;
        for c in 0..m {
            let w: f64 = (0..panels.len()).map(|i| rems[i * m + c].width()).sum();
            worst = worst.max(w);
        }
        if worst <= opts.target_width {
            break;
        }
        if panels.len() >= opts.max_panels {
            budget_exceeded = true;
            break;
        }
        let mean = panels.iter().map(|p| p.score).sum::<f64>() / panels.len() as f64;
        let room = opts.max_panels - panels.len();
        let mut split: Vec<usize> = (0..panels.len()).filter(|&i| panels[i].score >= mean).collect();
        if split.len() > room {
            split.sort_by(|&i, &j| panels[j].score.total_cmp(&panels[i].score));
            split.truncate(room);
        }
        let mut progressed = false;
        for i in split {
            let (a, b) = (panels[i].a, panels[i].b);
            let c = Interval::raw(a, b).mid();
            if c <= a || c >= b {
                continue;
            }
            progressed = true;
            panels[i].b = c;
            eval(&panels[i], &mut v, &mut rm)?;
            panels[i].score = score(&rm);
            vals[i * m..(i + 1) * m].copy_from_slice(&v);
            rems[i * m..(i + 1) * m].copy_from_slice(&rm);
            let mut q = Panel { a: c, b, score: 0.0 };
            eval(&q, &mut v, &mut rm)?;
            q.score = score(&rm);
            panels.push(q);
            vals.extend_from_slice(&v);
            rems.extend_from_slice(&rm);
        }
        if !progressed {
            budget_exceeded = true;
            break;
        }
    }

    let mut values = vec![Interval::ZERO; m];
    for i in 0..panels.len() {
        for c in 0..m {
            values[c] += vals[i * m + c] + rems[i * m + c];
        }
    }
    Ok(QuadResult { values, panels: panels.len(), budget_exceeded })
}

/// Taylor-model quadrature: on each panel [a,b] with float midpoint m the
/// integrand is expanded to degree N−2 at m (thin coefficients) with Lagrange
/// remainder c_{N−1}(ξ)(x−m)^{N−1}, ξ ∈ [a,b]; N−1 must be even so that the
/// remainder weight is nonnegative. The target bounds the summed widths of
/// the panel enclosures.
pub fn integrate_taylor_many<const N: usize, F>(mut f: F, m: usize, dom: Interval, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(Taylor<N>, &mut [Taylor<N>]) -> Result<()>,
{
    if N < 3 || N % 2 == 0 {
        return Err(domain("Taylor quadrature needs an odd number N ≥ 3 of coefficients"));
    }
    if !(opts.target_width > 0.0) {
        return Err(domain("quadrature target width must be positive"));
    }
    if !dom.is_finite() {
        return Err(domain("quadrature domain must be finite"));
    }
    if dom.is_point() || m == 0 {
        return Ok(QuadResult { values: vec![Interval::ZERO; m], panels: 0, budget_exceeded: false });
    }
    let mut centre = vec![Taylor::<N>::ZERO; m];
    let mut range = vec![Taylor::<N>::ZERO; m];
    let mut eval = |p: &Panel, vals: &mut [Interval]| -> Result<()> {
        let mid = Interval::raw(p.a, p.b).mid();
        let r = Interval::point(p.b) - mid;
        let l = Interval::point(p.a) - mid;
        let mut moments = [Interval::ZERO; N];
        let (mut rp, mut lp) = (r, l);
        for (k, mk) in moments.iter_mut().enumerate() {
            *mk = (rp - lp) / (k + 1) as f64;
            rp = rp * r;
            lp = lp * l;
        }
        f(Taylor::variable(Interval::point(mid)), &mut centre)?;
        f(Taylor::variable(Interval::raw(p.a, p.b)), &mut range)?;
        for c in 0..m {
            let mut acc = range[c].c[N - 1] * moments[N - 1];
            for k in 0..N - 1 {
                acc += centre[c].c[k] * moments[k];
            }
            vals[c] = acc;
        }
        Ok(())
    };

    let init = subdivide(dom, opts.initial_panels.max(1));
    let mut panels: Vec<Panel> = Vec::with_capacity(init.len());
    let mut vals: Vec<Interval> = Vec::new();
    let mut v = vec![Interval::ZERO; m];
    let score = |v: &[Interval]| v.iter().map(|x| x.width()).fold(0.0, f64::max);
    for j in init {
        let mut p = Panel { a: j.lo(), b: j.hi(), score: 0.0 };
        eval(&p, &mut v)?;
        p.score = score(&v);
        panels.push(p);
        vals.extend_from_slice(&v);
    }

    let mut budget_exceeded = false;
    loop {
        let mut worst = 0.0f64;
        for c in 0..m {
            let w: f64 = (0..panels.len()).map(|i| vals[i * m + c].width()).sum();
            worst = worst.max(w);
        }
        if worst <= opts.target_width {
            break;
        }
        if panels.len() >= opts.max_panels {
            budget_exceeded = true;
            break;
        }
        let mean = panels.iter().map(|p| p.score).sum::<f64>() / panels.len() as f64;
        let room = opts.max_panels - panels.len();
        let mut split: Vec<usize> = (0..panels.len()).filter(|&i| panels[i].score >= mean).collect();
        if split.len() > room {
            split.sort_by(|&i, &j| panels[j].score.total_cmp(&panels[i].score));
            split.truncate(room);
        }
        let mut progressed = false;
        for i in split {
            let (a, b) = (panels[i].a, panels[i].b);
            let c = Interval::raw(a, b).mid();
            if c <= a || c >= b {
                continue;
            }
            progressed = true;
            panels[i].b = c;
            eval(&panels[i], &mut v)?;
            panels[i].score = score(&v);
            vals[i * m..(i + 1) * m].copy_from_slice(&v);
            let mut q = Panel { a: c, b, score: 0.0 };
            eval(&q, &mut v)?;
            q.score = score(&v);
            panels.push(q);
            vals.extend_from_slice(&v);
        }
        if !progressed {
            budget_exceeded = true;
            break;
        }
    }

    let mut values = vec![Interval::ZERO; m];
    for i in 0..panels.len() {
        for c in 0..m {
            values[c] += vals[i * m + c];
        }
    }
    Ok(QuadResult { values, panels: panels.len(), budget_exceeded })
}

/// Zeroth-order enclosure Σ |J_i|·f(J_i) over `pieces` equal pieces; valid for
/// merely bounded integrands (e.g. across a jump).
pub fn integrate_range<F>(mut f: F, m: usize, dom: Interval, pieces: usize) -> Result<Vec<Interval>>
where
    F: FnMut(Interval, &mut [Interval]) -> Result<()>,
{
    let mut out = vec![Interval::ZERO; m];
    if dom.is_point() {
        return Ok(out);
    }
    let mut buf = vec![Interval::ZERO; m];
    for j in subdivide(dom, pieces) {
        let h = Interval::point(j.hi()) - j.lo();
        f(j, &mut buf)?;
        for c in 0..m {
            out[c] += buf[c] * h;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn constants_and_polynomials() {
        let r = integrate_verified(|_| Ok(Jet2::constant(Interval::ONE)), unit(), 1e-10).unwrap();
        assert!(r.value().contains(1.0) && r.value().width() < 1e-10);
        let r = integrate_verified(|x| Ok(x.sqr()), unit(), 1e-8).unwrap();
        assert!(r.value().contains(1.0 / 3.0));
        assert!(r.value().width() < 2e-8);
        assert!(!r.budget_exceeded);
    }

    #[test]
    fn gaussian() {
        let d = Interval::new(-1.0, 1.0).unwrap();
        let r = integrate_verified(|x| Ok((-x.sqr()).exp()), d, 1e-7).unwrap();
        // 2∫_0^1 e^{-x²} = sqrt(pi) erf(1)
        assert!(r.value().contains(1.4936482656248540), "{}", r.value());
        assert!(r.value().width() < 2e-7);
    }

    #[test]
    fn budget_flag() {
        let opts = QuadOptions { target_width: 1e-14, max_panels: 16, initial_panels: 4 };
        let r = integrate_verified_many(
            |x, out| {
                out[0] = (-x.sqr()).exp();
                Ok(())
            },
            1,
            unit(),
            &opts,
        )
        .unwrap();
        assert!(r.budget_exceeded);
        assert!(r.value().contains(0.7468241328124270));
    }

    #[test]
    fn subdivide_covers() {
        let p = subdivide(unit(), 2);
        assert_eq!(p, vec![Interval::new(0.0, 0.5).unwrap(), Interval::new(0.5, 1.0).unwrap()]);
        let p = subdivide(unit(), 100);
        assert_eq!(p.len(), 100);
        assert!(p.iter().all(|j| (j.width() - 0.01).abs() < 1e-12));
    }

    #[test]
    fn range_rule_encloses_step() {
        let d = Interval::new(0.0, 2.0).unwrap();
        let r = integrate_range(
            |j, out| {
                out[0] = if j.hi() <= 1.0 {
                    Interval::ONE
                } else if j.lo() >= 1.0 {
                    Interval::ZERO
                } else {
                    unit()
                };
                Ok(())
            },
            1,
            d,
            7,
        )
        .unwrap();
        assert!(r[0].contains(1.0));
    }
}
