use proptest::prelude::*;
use trigap::airy::{eval_a, eval_a_naive, eval_a_prime, eval_a_second, Accumulation, AirySeriesConfig};
use trigap::interval::Interval;

fn cfg() -> AirySeriesConfig {
    AirySeriesConfig::default()
}

fn pt(x: f64) -> Interval {
    Interval::point(x)
}

// 𝒜(x) = Ai(−x), 𝒜′(x) = −Ai′(−x); mpmath at 30 digits
const REFERENCE: [(f64, f64, f64); 6] = [
    (-2.0, 0.0349241304232743791, 0.0530903844336536317),
    (-1.0, 0.135292416312881416, 0.159147441296793213),
    (1.0, 0.535560883292352119, 0.0101605671166452094),
    (2.5, -0.112325067692966089, -0.678852734264794363),
    (5.0, 0.350761009024114320, -0.327192818554443137),
    (7.5, 0.321775716380647875, -0.318809506698554596),
];

#[test]
fn point_values_match_mpmath() {
    for (x, a, ap) in REFERENCE {
        let v = eval_a(pt(x), &cfg()).unwrap();
        let d = eval_a_prime(pt(x), &cfg()).unwrap();
        assert!(v.inflate(1e-15).contains(a), "A({x}) = {v:?}, want {a}");
        assert!(d.inflate(1e-15).contains(ap), "A'({x}) = {d:?}, want {ap}");
    }
    let zero = eval_a(pt(0.0), &cfg()).unwrap();
    assert!(zero.contains(0.3550280538878172) && zero.width() < 1e-15);
    assert!(eval_a_prime(pt(0.0), &cfg()).unwrap().contains(0.2588194037928068));
}

#[test]
fn zeros_are_straddled() {
    // first zero of Ai at −2.33810741045976704 and of Ai′ at −1.0187930, −3.2481975
    assert!(eval_a(Interval::new(2.338107410459766, 2.338107410459768).unwrap(), &cfg()).unwrap().contains_zero());
    assert!(eval_a_prime(Interval::new(1.018792, 1.018794).unwrap(), &cfg()).unwrap().contains_zero());
    assert!(eval_a_prime(Interval::new(3.248197, 3.248199).unwrap(), &cfg()).unwrap().contains_zero());
    assert!(!eval_a(Interval::new(2.3381, 2.33810).unwrap(), &cfg()).unwrap().contains_zero());
}

#[test]
fn airy_equation_residual_contains_zero() {
    // 𝒜″(x) = −x·𝒜(x)
    for i in 0..200 {
        let x = -8.0 + 16.0 * i as f64 / 199.0;
        let r = eval_a_second(pt(x), &cfg()).unwrap() + pt(x) * eval_a(pt(x), &cfg()).unwrap();
        assert!(r.contains_zero(), "x = {x}: residual {r:?}");
    }
}

#[test]
fn out_of_range_arguments_are_rejected() {
    assert!(eval_a(pt(8.5), &cfg()).is_err());
    assert!(eval_a(Interval::new(7.0, 9.0).unwrap(), &cfg()).is_err());
}

#[test]
fn double_accumulation_is_still_valid_but_wider() {
    let plain = AirySeriesConfig { accumulation: Accumulation::Double, ..cfg() };
    for x in [4.0, 6.0, 7.5] {
        let dd = eval_a(pt(x), &cfg()).unwrap();
        let d = eval_a(pt(x), &plain).unwrap();
        assert!(d.overlaps(dd) && d.width() >= dd.width());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn point_widths_are_small(x in -6.0f64..6.0) {
        prop_assert!(eval_a(pt(x), &cfg()).unwrap().width() <= 1e-10);
        prop_assert!(eval_a_prime(pt(x), &cfg()).unwrap().width() <= 1e-10);
    }

    #[test]
    fn refinement_keeps_containment(lo in -7.5f64..7.0, w in 1e-9f64..0.5, f in 0.0f64..1.0, g in 0.0f64..1.0) {
        let big = Interval::new(lo, (lo + w).min(8.0)).unwrap();
        let (a, b) = (big.lo() + f * big.width(), big.lo() + g * big.width());
        let small = Interval::new(a.min(b), a.max(b).min(big.hi())).unwrap();
        // the plain series is inclusion isotone
        let slack = 2.0 * f64::EPSILON;
        prop_assert!(eval_a_naive(big, &cfg()).unwrap().inflate(slack).encloses(eval_a_naive(small, &cfg()).unwrap()));
        // the refined forms are centred, hence checked against point values
        for eval in [eval_a, eval_a_prime] {
            let outer = eval(big, &cfg()).unwrap().inflate(slack);
            prop_assert!(outer.overlaps(eval(small, &cfg()).unwrap()));
            for k in 0..=16 {
                let x = (small.lo() + small.width() * k as f64 / 16.0).min(small.hi());
                prop_assert!(outer.encloses(eval(pt(x), &cfg()).unwrap()), "{big:?} at {x}");
            }
        }
    }
}
