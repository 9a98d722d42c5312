//! Randomised invariants of the building blocks.

use frac_hh::etaconvex::{check_eta_convex, default_tolerance, eta_upper_bound};
use frac_hh::functions::{constant, exponential, polynomial, square};
use frac_hh::inequalities::{r_terms, theta, wp, ThetaMoments};
use frac_hh::operators::{frac_left, frac_right, reflect, substituted, symmetrize};
use frac_hh::specialfn::k_gamma;
use frac_hh::{EtaFn, FracParams, Interval, QuadSpec, RealFn};
use proptest::prelude::*;

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * (1.0 + x.abs().max(y.abs()))
}

fn params() -> impl Strategy<Value = FracParams> {
    (0.3f64..2.5, 0.5f64..2.0, -0.6f64..1.5).prop_map(|(alpha, k, r)| FracParams::new(alpha, k, r).unwrap())
}

fn interval() -> impl Strategy<Value = Interval> {
    (0.1f64..2.0, 0.2f64..2.0).prop_map(|(a, len)| Interval::new(a, a + len).unwrap())
}

fn cubic() -> impl Strategy<Value = RealFn> {
    prop::collection::vec(-2.0f64..2.0, 4).prop_map(polynomial)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn k_gamma_recurrence(x in 0.05f64..20.0, k in 0.5f64..4.0) {
        let lhs = k_gamma(x + k, k).unwrap();
        let rhs = x * k_gamma(x, k).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs(), "{lhs} vs {rhs}");
    }

    #[test]
    fn theta_is_antisymmetric(iv in interval(), p in params(), t in 0.0f64..=1.0) {
        let s = theta(t, &iv, &p).unwrap();
        let m = theta(1.0 - t, &iv, &p).unwrap();
        prop_assert!((s + m).abs() <= 1e-12 * (1.0 + s.abs()), "{s} {m}");
    }

    #[test]
    fn theta_matches_wp(iv in interval(), p in params(), t in 0.0f64..=1.0) {
        let w = t * iv.a + (1.0 - t) * iv.b;
        prop_assert!(close(theta(t, &iv, &p).unwrap(), wp(w, &iv, &p).unwrap(), 1e-10));
    }

    #[test]
    fn decomposition_terms_pair_up(iv in interval(), p in params()) {
        let q = QuadSpec::default();
        let r = r_terms(&iv, &p, &q).unwrap();
        let scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for v in r {
            prop_assert!(v >= -1e-10 * scale, "{r:?}");
        }
        prop_assert!(close(r[0], r[3], 1e-9) && close(r[1], r[2], 1e-9), "{r:?}");
        // the signed ξ pieces still have to add up to the weighted moment
        let m = ThetaMoments::compute(&iv, &p, &q).unwrap();
        prop_assert!(m.cross_check(&iv).is_ok(), "{m:?}");
    }

    #[test]
    fn reflection_is_an_involution(iv in interval(), g in cubic(), t in 0.0f64..=1.0) {
        let x = iv.a + t * iv.width();
        let twice = reflect(&reflect(&g, &iv), &iv);
        prop_assert!(close(twice.eval(x), g.eval(x), 1e-12));
    }

    #[test]
    fn symmetrization_is_symmetric(iv in interval(), g in cubic(), t in 0.0f64..=1.0) {
        let x = iv.a + t * iv.width();
        let h = symmetrize(&g, &iv);
        prop_assert!(close(h.eval(x), h.eval(iv.mirror(x)), 1e-12));
    }

    #[test]
    fn operators_are_linear(iv in interval(), p in params(), c1 in -3.0f64..3.0, c2 in -3.0f64..3.0) {
        let q = QuadSpec::default();
        let (f, g) = (square(), exponential());
        let (f2, g2) = (f.clone(), g.clone());
        let mix = RealFn::new("mix", move |x| c1 * f2.eval(x) + c2 * g2.eval(x));
        let combine = |op: &dyn Fn(&RealFn) -> f64| (op(&mix), c1 * op(&f) + c2 * op(&g));
        let (l, lc) = combine(&|h| frac_left(h, iv.b, iv.a, &p, &q).unwrap());
        let (r, rc) = combine(&|h| frac_right(h, iv.a, iv.b, &p, &q).unwrap());
        prop_assert!(close(l, lc, 1e-8), "{l} {lc}");
        prop_assert!(close(r, rc, 1e-8), "{r} {rc}");
    }

    #[test]
    fn unit_substitution_agrees(iv in interval(), p in params(), g in cubic()) {
        let q = QuadSpec::default();
        let direct = frac_left(&g, iv.b, iv.a, &p, &q).unwrap();
        let unit = substituted::frac_left_unit(&g, iv.b, iv.a, &p, &q).unwrap();
        prop_assert!(close(direct, unit, 1e-8), "left {direct} {unit}");
        let direct = frac_right(&g, iv.a, iv.b, &p, &q).unwrap();
        let unit = substituted::frac_right_unit(&g, iv.a, iv.b, &p, &q).unwrap();
        prop_assert!(close(direct, unit, 1e-8), "right {direct} {unit}");
    }

    #[test]
    fn reflected_unit_forms_agree(iv in interval(), p in params(), g in cubic()) {
        let q = QuadSpec::default();
        let gr = reflect(&g, &iv);
        let direct = frac_left(&gr, iv.b, iv.a, &p, &q).unwrap();
        let unit = substituted::frac_left_reflected_unit(&g, &iv, &p, &q).unwrap();
        prop_assert!(close(direct, unit, 1e-8), "left {direct} {unit}");
        let direct = frac_right(&gr, iv.a, iv.b, &p, &q).unwrap();
        let unit = substituted::frac_right_reflected_unit(&g, &iv, &p, &q).unwrap();
        prop_assert!(close(direct, unit, 1e-8), "right {direct} {unit}");
    }

    #[test]
    fn constants_integrate_to_the_kernel_mass(iv in interval(), p in params(), c in -5.0f64..5.0) {
        let q = QuadSpec::default();
        let one = frac_left(&constant(1.0), iv.b, iv.a, &p, &q).unwrap();
        let scaled = frac_left(&constant(c), iv.b, iv.a, &p, &q).unwrap();
        prop_assert!(close(scaled, c * one, 1e-10));
        let s = p.ratio();
        let mass = (iv.b.powf(p.rho()) - iv.a.powf(p.rho())).powf(s)
            / (k_gamma(p.alpha + p.k, p.k).unwrap() * p.rho().powf(s));
        prop_assert!(close(one, mass, 1e-8), "{one} {mass}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn convex_quadratics_pass_with_zero_eta_gap(iv in interval(), c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in 0.0f64..2.0) {
        let g = polynomial(vec![c0, c1, c2]);
        let eta = EtaFn::difference();
        let tol = default_tolerance(&g, &iv, 12);
        prop_assert!(check_eta_convex(&g, &eta, &iv, 12, tol).unwrap().holds);
    }

    #[test]
    fn eta_upper_bound_grows_with_grid(iv in interval(), g in cubic(), c in 0.0f64..1.0) {
        let eta = EtaFn::difference_plus(c);
        let mut last = f64::NEG_INFINITY;
        for n in [8, 12, 16] {
            let m = eta_upper_bound(&eta, &g, &iv, n).unwrap();
            prop_assert!(m >= last, "{m} < {last} at n = {n}");
            last = m;
        }
    }
}
