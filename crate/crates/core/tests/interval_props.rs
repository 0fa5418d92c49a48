//! Containment fuzzing for the interval kernel. Arithmetic is checked exactly:
//! operands are dyadic with 24-bit numerators, so sums, differences and
//! products are exact doubles, and quotient containment is decided by the
//! sign of a single fused multiply-add.

use proptest::prelude::*;
use trigap::interval::{integrate_verified, subdivide, ArithKind, Elementary, Interval, Jet2};
use trigap::Error;

const SCALE: f64 = 1.0 / (1u64 << 20) as f64;

/// (X, x ∈ X) with dyadic endpoints in about [−16, 32].
fn dyadic_pair() -> impl Strategy<Value = (Interval, f64)> {
    (-(1i64 << 24)..(1i64 << 24), 0i64..(1i64 << 24), 0.0f64..=1.0).prop_map(|(a, w, f)| {
        let lo = a as f64 * SCALE;
        let hi = (a + w) as f64 * SCALE;
        let k = (f * w as f64).floor() as i64;
        (Interval::new(lo, hi).unwrap(), (a + k) as f64 * SCALE)
    })
}

fn quotient_contained(r: Interval, x: f64, y: f64) -> bool {
    // q = x/y ≥ lo ⟺ lo·y − x has the sign of −y (or is 0)
    let below = |e: f64| {
        let d = e.mul_add(y, -x);
        if y > 0.0 {
            d <= 0.0
        } else {
            d >= 0.0
        }
    };
    let above = |e: f64| {
        let d = e.mul_add(y, -x);
        if y > 0.0 {
            d >= 0.0
        } else {
            d <= 0.0
        }
    };
    below(r.lo()) && above(r.hi())
}

fn near(r: Interval, v: f64) -> bool {
    r.lo() <= v.next_up() && r.hi() >= v.next_down()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn arithmetic_contains_exact_results((xi, x) in dyadic_pair(), (yi, y) in dyadic_pair()) {
        prop_assert!((xi + yi).contains(x + y));
        prop_assert!((xi - yi).contains(x - y));
        prop_assert!((xi * yi).contains(x * y));
        match trigap::interval::arith(xi, yi, ArithKind::Div) {
            Ok(q) => prop_assert!(quotient_contained(q, x, y)),
            Err(e) => prop_assert!(yi.contains_zero() && e == Error::DivisionByZeroInterval),
        }
    }

    #[test]
    fn elementary_functions_contain_libm_values(lo in -3.0f64..3.0, w in 0.0f64..1.0, f in 0.0f64..=1.0) {
        let xi = Interval::new(lo, lo + w).unwrap();
        let x = (lo + f * w).min(xi.hi());
        prop_assert!(near(xi.exp(), x.exp()));
        prop_assert!(near(xi.sin(), x.sin()));
        prop_assert!(near(xi.cos(), x.cos()));
        prop_assert!(near(xi.cbrt(), x.cbrt()));
        prop_assert!(near(xi.abs(), x.abs()));
        prop_assert!(near(xi.pow_int(3).unwrap(), x.powi(3)));
        prop_assert!(near(trigap::interval::elementary(xi, Elementary::Abs).unwrap(), x.abs()));
        if xi.lo() >= 0.0 {
            prop_assert!(near(xi.sqrt().unwrap(), x.sqrt()));
            prop_assert!(near(xi.pow_rational(2, 3).unwrap(), x.powf(2.0 / 3.0)));
            prop_assert!(near(xi.pow_rational(4, 3).unwrap(), x.powf(4.0 / 3.0)));
        } else {
            prop_assert!(xi.sqrt().is_err());
        }
        if xi.lo() > 0.0 {
            prop_assert!(near(xi.ln().unwrap(), x.ln()));
        }
        // tan is only enclosed away from its poles
        let ti = Interval::new(lo / 2.0, (lo + w) / 2.0).unwrap();
        match ti.tan() {
            Ok(r) => prop_assert!(near(r, (x / 2.0).tan())),
            Err(_) => prop_assert!(ti.hi() >= std::f64::consts::FRAC_PI_2 - 1e-9 || ti.lo() <= -std::f64::consts::FRAC_PI_2 + 1e-9),
        }
    }

    #[test]
    fn point_operations_are_tight(x in -1e3f64..1e3, y in 0.5f64..1e3) {
        let (xi, yi) = (Interval::point(x), Interval::point(y));
        for (r, v) in [(xi + yi, x + y), (xi - yi, x - y), (xi * yi, x * y), (xi / yi, x / y)] {
            prop_assert!(r.contains(v));
            prop_assert!(r.width() <= 2.0 * (v.abs() * f64::EPSILON).max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn subdivision_covers(a in -100.0f64..100.0, w in 1e-6f64..50.0, n in 1usize..200) {
        let x = Interval::new(a, a + w).unwrap();
        let parts = subdivide(x, n);
        prop_assert_eq!(parts.len(), n);
        prop_assert_eq!(parts[0].lo(), x.lo());
        prop_assert_eq!(parts[n - 1].hi(), x.hi());
        for p in parts.windows(2) {
            prop_assert_eq!(p[0].hi(), p[1].lo());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cubic_integrals_are_enclosed(c in prop::array::uniform4(-8i32..8), a in -16i32..16, w in 1i32..16) {
        // dyadic data: the antiderivative difference is an exact double
        let (lo, hi) = (a as f64 / 8.0, (a + w) as f64 / 8.0);
        let c = c.map(f64::from);
        let anti = |x: f64| c[0] * x + c[1] * x * x / 2.0 + c[2] * x.powi(3) / 3.0 + c[3] * x.powi(4) / 4.0;
        let r = integrate_verified(
            |x: Jet2| {
                let p = ((x * Interval::point(c[3]) + Interval::point(c[2])) * x + Interval::point(c[1])) * x + Interval::point(c[0]);
                Ok(p)
            },
            Interval::new(lo, hi).unwrap(),
            1e-9,
        )
        .unwrap();
        // c₂x³/3 is not exact, so enclose the reference value too
        let exact = Interval::point(anti(hi)) - Interval::point(anti(lo));
        prop_assert!(r.value().overlaps(exact.inflate(1e-13)), "{:?} vs {:?}", r.value(), exact);
    }

    #[test]
    fn jet_derivatives_match_central_differences(x in -1.5f64..1.5) {
        let f = |j: Jet2| (-(j.sqr())).exp() * (j + Interval::ONE).sqr() * (j + Interval::point(2.5)).recip();
        let fp = |x: f64| (-(x * x)).exp() * (1.0 + x).powi(2) / (2.5 + x);
        let j = f(Jet2::variable(Interval::point(x)));
        let h = 1e-4;
        let d1 = (fp(x + h) - fp(x - h)) / (2.0 * h);
        let d2 = (fp(x + h) - 2.0 * fp(x) + fp(x - h)) / (h * h);
        prop_assert!(j.d1.inflate(1e-7).contains(d1), "{:?} vs {d1}", j.d1);
        prop_assert!(j.d2.inflate(1e-5).contains(d2), "{:?} vs {d2}", j.d2);
    }
}

#[test]
fn reference_arithmetic_examples() {
    let iv = |a, b| Interval::new(a, b).unwrap();
    assert_eq!(iv(1.0, 2.0) + iv(3.0, 4.0), iv(4.0, 6.0));
    assert_eq!(iv(-1.0, 2.0) * iv(3.0, 4.0), iv(-4.0, 8.0));
    assert_eq!(iv(1.0, 1.0).checked_div(iv(0.0, 1.0)), Err(Error::DivisionByZeroInterval));
    assert_eq!(iv(4.0, 9.0).sqrt().unwrap(), iv(2.0, 3.0));
    let pi = trigap::interval::pi_enclosure();
    let t0 = (pi / 60.0).tan().unwrap();
    assert!(iv(0.05240, 0.05241).encloses(t0));
    assert!(pi.contains(std::f64::consts::PI) && pi.width() <= 4.0 * f64::EPSILON * 4.0);
    assert!((pi.sqr() * 3.0).contains(29.608813203268074));
}
