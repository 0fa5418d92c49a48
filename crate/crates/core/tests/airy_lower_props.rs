use proptest::prelude::*;
use trigap::airy::{eval_a, eval_a_prime, AirySeriesConfig};
use trigap::airy_lower::{
    certify_no_crossing, eval_fs, eval_fs_dkappa, eval_fs_variant, isolate_positive_roots, matching_coeffs,
    matching_residuals, mu_bar_bound, mu_kappa_factor, RootEvidence, Variant, KAPPA_MAX,
};
use trigap::interval::Interval;
use trigap::Error;

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn pt(x: f64) -> Interval {
    Interval::point(x)
}

// positive roots of f_s, mpmath (findroot on the closed form, 25 digits)
const ROOTS: [(f64, [f64; 3]); 5] = [
    (0.0, [1.01879297164747109, 2.33810741045976704, 3.24819758217983654]),
    (0.25, [1.02606822864216569, 2.3233184600557266, 3.26489091651316917]),
    (0.5, [1.05073711606674894, 2.29312383428676163, 3.26790981345846453]),
    (0.75, [1.10696185582011686, 2.28066815136978886, 3.23464947379232997]),
    (1.0, [1.47291537167672642, 2.57524677778332782, 3.47773476731080360]),
];

#[test]
fn roots_match_mpmath() {
    for (s, want) in ROOTS {
        let r = isolate_positive_roots(pt(s), 3.6).unwrap();
        assert_eq!(r.len(), 3, "s = {s}: {r:?}");
        for (k, (e, w)) in r.iter().zip(want).enumerate() {
            assert_eq!(e.index, k + 1);
            assert!(e.root.contains(w) && e.root.width() <= 1e-4, "s = {s}: {e:?} vs {w}");
        }
    }
}

#[test]
fn roots_are_simple_and_increasing() {
    for s in [0.0, 0.25, 0.5, 0.75] {
        let r = isolate_positive_roots(pt(s), 3.6).unwrap();
        assert_eq!(r.len(), 3);
        for w in r.windows(2) {
            assert!(w[0].root.hi() < w[1].root.lo());
        }
        for e in &r {
            let f = eval_fs(pt(s), e.root).unwrap();
            assert!(f.contains_zero());
            if e.evidence == RootEvidence::IntervalNewtonUnique {
                assert!(!eval_fs_dkappa(pt(s), e.root).unwrap().contains_zero());
            }
        }
    }
}

#[test]
fn minus_variant_vanishes_at_zero() {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let k = 4.0 * i as f64 / 99.0;
        let f = eval_fs_variant(Interval::ZERO, pt(k), Variant::Minus).unwrap();
        worst = worst.max(f.mag());
    }
    assert!(worst < 1e-12, "{worst}");
    // the plus sign is the characteristic function: f₀ = 2𝒜𝒜′
    let f = eval_fs_variant(Interval::ZERO, pt(1.7), Variant::Plus).unwrap();
    let cfg = AirySeriesConfig::default();
    let want = eval_a(pt(1.7), &cfg).unwrap() * eval_a_prime(pt(1.7), &cfg).unwrap() * 2.0;
    assert!(f.overlaps(want));
}

#[test]
fn roots_at_zero_interlace() {
    // odd roots are zeros of 𝒜′ (even eigenfunctions), the middle one of 𝒜
    let cfg = AirySeriesConfig::default();
    let r = isolate_positive_roots(Interval::ZERO, 3.6).unwrap();
    assert!(eval_a_prime(r[0].root, &cfg).unwrap().contains_zero());
    assert!(!eval_a(r[0].root, &cfg).unwrap().contains_zero());
    assert!(eval_a(r[1].root, &cfg).unwrap().contains_zero());
    assert!(!eval_a_prime(r[1].root, &cfg).unwrap().contains_zero());
    assert!(eval_a_prime(r[2].root, &cfg).unwrap().contains_zero());
}

#[test]
fn matching_conditions_hold_at_roots() {
    let r0 = isolate_positive_roots(Interval::ZERO, 3.6).unwrap();
    // odd eigenfunction at κ₂(0): equal and opposite-slope pieces
    let (am, ap) = matching_coeffs(0.0, &r0[1]).unwrap();
    assert!((am.mid().abs() - ap.mid().abs()).abs() < 1e-3 * am.mag());
    for s in [0.0, 0.3, 0.75] {
        for root in isolate_positive_roots(pt(s), 3.6).unwrap() {
            let alpha = matching_coeffs(s, &root).unwrap();
            assert!(alpha.0.mag() > 1e-3 || alpha.1.mag() > 1e-3);
            let (c, d) = matching_residuals(s, root.root, alpha).unwrap();
            assert!(c.contains_zero() && d.contains_zero(), "s = {s}, {root:?}: {c:?} {d:?}");
        }
    }
    let bad = isolate_positive_roots(pt(1.0), 3.6).unwrap()[0];
    assert!(matching_coeffs(1.0, &bad).is_err());
}

#[test]
fn positivity_on_the_default_box() {
    let c = certify_no_crossing(iv(3.2174, 3.2175), 30).unwrap();
    assert!(c.min_inf > 0.0 && c.s_cover.len() <= 10_000);
    assert_eq!(c.s_cover.first().unwrap().lo(), 0.0);
    assert_eq!(c.s_cover.last().unwrap().hi(), 1.0);
    for w in c.s_cover.windows(2) {
        assert_eq!(w[0].hi(), w[1].lo());
    }
    for p in &c.s_cover {
        assert!(eval_fs(*p, c.kappa_box).unwrap().lo() > 0.0);
    }
}

#[test]
fn positivity_fails_across_a_root() {
    // κ₂(0) = 2.3381 lies in this box
    let e = certify_no_crossing(iv(2.338, 2.3382), 12).unwrap_err();
    assert!(matches!(e, Error::DepthExceeded { .. }), "{e}");
}

#[test]
fn kappa_to_mu_scaling() {
    assert!(mu_kappa_factor().inflate(1e-13).contains(7.30387211937511) && mu_kappa_factor().width() < 1e-12);
    assert!(mu_bar_bound(3.21744).unwrap().inflate(1e-12).contains(23.4997703117622));
    assert!(mu_bar_bound(3.2481).unwrap().inflate(1e-12).contains(23.7237070309423));
    // the proof uses the upper end of the box: κ₃(s) > 3.2175
    assert!(mu_bar_bound(3.2175).unwrap().lo() > 23.5);
    assert!(mu_bar_bound(3.2174).unwrap().hi() < 23.5);
    assert!(mu_bar_bound(0.0).is_err());
}

#[test]
fn domain_is_checked() {
    assert!(eval_fs(pt(1.01), pt(1.0)).is_err());
    assert!(eval_fs(pt(0.5), pt(KAPPA_MAX + 0.1)).is_err());
    assert!(eval_fs(pt(-0.1), pt(1.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn box_values_enclose_point_values(s in 0.0f64..1.0, ws in 0.0f64..0.05, k in 0.0f64..4.8, wk in 0.0f64..0.1, f in 0.0f64..=1.0, g in 0.0f64..=1.0) {
        let sb = iv(s, (s + ws).min(1.0));
        let kb = iv(k, (k + wk).min(KAPPA_MAX));
        let (sp, kp) = ((sb.lo() + f * sb.width()).min(sb.hi()), (kb.lo() + g * kb.width()).min(kb.hi()));
        let outer = eval_fs(sb, kb).unwrap();
        prop_assert!(outer.encloses(eval_fs(pt(sp), pt(kp)).unwrap()), "{sb:?} × {kb:?} at ({sp}, {kp})");
    }

    #[test]
    fn kappa_derivative_matches_differences(s in 0.0f64..0.99, k in 0.1f64..4.5) {
        let h = 1e-5;
        let fd = (eval_fs(pt(s), pt(k + h)).unwrap().mid() - eval_fs(pt(s), pt(k - h)).unwrap().mid()) / (2.0 * h);
        let d = eval_fs_dkappa(pt(s), pt(k)).unwrap();
        prop_assert!(d.inflate(1e-6).contains(fd), "{d:?} vs {fd}");
    }
}
