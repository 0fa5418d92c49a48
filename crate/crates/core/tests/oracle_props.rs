use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trigap::geometry::t0_enclosure;
use trigap::oracle::{
    cross_check_sandwich, cross_check_scaling, fd_eigs_1d, fem_triangle_eigs, mu_of_lambda, Potential1d, TriangleMesh,
};
use trigap::prover::{prove_separation, ProofCertificate, ProofConfig, Verdict};

/// Certified U of the default run (n = 17, 100 pieces).
const U: f64 = 21.026874868319762;
/// lower_transfer(23.5, t₀).lo
const L: f64 = 21.14925376767771;

fn t0() -> f64 {
    t0_enclosure().lo()
}

fn mu2_problem2(s: f64, t: f64, n: usize) -> f64 {
    fd_eigs_1d(&Potential1d::Problem2 { s, t }, None, n, 2).unwrap().eigs[1]
}

/// A certificate carrying the default run's U and L, without paying for the sweep.
fn proven_certificate() -> ProofCertificate {
    let mut c = prove_separation(&ProofConfig { n_basis: 5, n_s: 2, max_refine_depth: 0, ..ProofConfig::default() });
    c.u = Some(U.to_string());
    c.l = Some(L.to_string());
    c.verdict = Verdict::Proven;
    c
}

fn harmonic() -> Potential1d {
    Potential1d::Custom(Arc::new(|x| x * x))
}

#[test]
fn harmonic_oscillator() {
    let r = fd_eigs_1d(&harmonic(), Some((-10.0, 10.0)), 4000, 3).unwrap();
    for (e, want) in r.eigs.iter().zip([1.0, 3.0, 5.0]) {
        assert!((e - want).abs() < 1e-3, "{e}");
    }
    assert!(r.edge_mass.iter().all(|&m| m < 1e-12) && !r.truncation_warning);
    assert!(fd_eigs_1d(&harmonic(), None, 4000, 3).is_err());
    assert!(fd_eigs_1d(&harmonic(), Some((-10.0, 10.0)), 50, 3).is_err());
}

#[test]
fn fd_is_second_order() {
    let err = |n: usize| fd_eigs_1d(&harmonic(), Some((-10.0, 10.0)), n, 3).unwrap().eigs[2] - 5.0;
    // n + 1 intervals: 400 → 800 halves h exactly
    let (e1, e2) = (err(399), err(799));
    let ratio = e1 / e2;
    assert!((3.8..4.2).contains(&ratio), "error ratio {ratio}");
}

#[test]
fn limit_problem_eigenvalues() {
    let r = fd_eigs_1d(&Potential1d::Problem3 { s: 0.0 }, None, 4000, 3).unwrap();
    // (2π²)^{2/3}·κ_k(0), mpmath
    for (e, want) in r.eigs.iter().zip([7.44114, 17.07712, 23.72442]) {
        assert!((e - want).abs() < 1e-2, "{e} vs {want}");
    }
    assert!(!r.truncation_warning);
    // a box that cuts the eigenfunctions off is flagged
    let cut = fd_eigs_1d(&Potential1d::Problem3 { s: 0.0 }, Some((-2.0, 2.0)), 1000, 3).unwrap();
    assert!(cut.truncation_warning);
    assert!(fd_eigs_1d(&Potential1d::Problem3 { s: 1.0 }, None, 1000, 3).is_err());
}

#[test]
fn scaling_agrees_with_the_airy_roots() {
    for k in 1..=3 {
        let rows = cross_check_scaling(k).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.rel_dev < 1e-3), "{rows:?}");
    }
    assert!(cross_check_scaling(4).is_err());
}

#[test]
fn problem2_at_t0_is_below_the_bounds() {
    let mu2 = mu2_problem2(0.0, t0(), 20000);
    assert!(mu2 <= 21.091 + 1e-2 && mu2 <= U, "{mu2}");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let s: f64 = rng.gen_range(0.0..0.999);
        let mu2 = mu2_problem2(s, t0(), 8000);
        assert!(mu2 <= U, "s = {s}: FD {mu2} above the certified {U}");
    }
}

#[test]
fn problem2_grows_with_t() {
    for s in [0.0, 0.6] {
        let vals: Vec<f64> = (1..=8).map(|k| mu2_problem2(s, t0() * k as f64 / 8.0, 20000)).collect();
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-4, "s = {s}: {vals:?}");
        }
    }
}

#[test]
fn problem2_tends_to_the_limit_problem() {
    // μ̂₂ᵗ − μ̄₂ = O(t^{2/3}): t/8 divides the error by 4, so extrapolate
    let limit = fd_eigs_1d(&Potential1d::Problem3 { s: 0.0 }, None, 8000, 2).unwrap().eigs[1];
    let t = t0() / 8.0;
    let (a, b) = (mu2_problem2(0.0, t, 20000), mu2_problem2(0.0, t / 8.0, 40000));
    let extrap = (4.0 * b - a) / 3.0;
    assert!((b - limit).abs() < (a - limit).abs());
    assert!((extrap - limit).abs() < 0.1 * (a - limit).abs().max(1e-2), "{a} {b} → {extrap} vs {limit}");
}

#[test]
fn fem_on_the_right_isosceles_triangle() {
    let r = fem_triangle_eigs(0.0, 1.0, 6, 4).unwrap();
    let pi2 = PI * PI;
    for (e, m) in r.eigs.iter().zip([5.0, 10.0, 13.0, 17.0]) {
        let want = m * pi2 / 2.0;
        assert!(*e >= want - 1e-9 && (e - want) / want < 0.02, "{e} vs {want}");
    }
    assert!(r.eigs.windows(2).all(|w| w[0] < w[1]));
    assert!(!r.ill_conditioned);
    assert!(fem_triangle_eigs(0.0, 1.0, 2, 4).is_err());
}

#[test]
fn fem_mesh_is_valid() {
    let m = TriangleMesh::new(0.4, 0.3, 4).unwrap();
    assert!((0..m.elements.len()).all(|e| m.signed_area(e) > 0.0));
    let area: f64 = (0..m.elements.len()).map(|e| m.signed_area(e)).sum();
    assert!((area - 0.3).abs() < 1e-12);
    for (v, &b) in m.vertices.iter().zip(&m.boundary) {
        let on_edge = v[1].abs() < 1e-12
            || (v[1] - 0.3 * (v[0] + 1.0) / 1.4).abs() < 1e-12
            || (v[1] - 0.3 * (1.0 - v[0]) / 0.6).abs() < 1e-12;
        assert_eq!(b, on_edge, "{v:?}");
    }
}

#[test]
fn fem_decreases_under_refinement() {
    let levels: Vec<Vec<f64>> = (4..=7).map(|l| fem_triangle_eigs(0.3, 0.5, l, 3).unwrap().eigs).collect();
    for w in levels.windows(2) {
        for (a, b) in w[0].iter().zip(&w[1]) {
            assert!(b <= &(a + 1e-9 * a), "{levels:?}");
        }
    }
}

#[test]
fn fem_gap_on_a_flat_triangle() {
    let r = fem_triangle_eigs(0.3, t0(), 6, 3).unwrap();
    let (l2, l3) = (r.eigs[1], r.eigs[2]);
    assert!(l2 < l3);
    assert!(l3 - l2 >= t0().powf(-4.0 / 3.0) * (L - U), "{l2} {l3}");
    assert!(mu_of_lambda(l2, t0()) > 0.0);
}

#[test]
fn sandwich_checks() {
    let cert = proven_certificate();
    for (s, t) in [(0.0, t0()), (0.9, t0() / 2.0)] {
        let r = cross_check_sandwich(s, t, &cert, 6).unwrap();
        assert!(r.mu2 <= U + r.tol2 && r.mu3 >= L - r.tol3, "{r:?}");
        assert!(r.lambda2 < r.lambda3);
    }
    assert!(cross_check_sandwich(0.5, 1.5 * t0(), &cert, 6).is_err());
    assert!(cross_check_sandwich(0.5, t0() / 2.0, &cert, 3).is_err());
    let mut unproven = cert;
    unproven.verdict = Verdict::NotProven;
    assert!(cross_check_sandwich(0.5, t0() / 2.0, &unproven, 6).is_err());
}
