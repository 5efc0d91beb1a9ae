//! Property tests over randomly drawn parameters.

use proptest::prelude::*;

use trap_lab::channels::{decompose, potential_matrix, Variant};
use trap_lab::classical::{integrate_trajectory, tuned_initial_state, ClassicalModel};
use trap_lab::fields::DimensionlessParams;
use trap_lab::output::{fmt_num, round_sig};
use trap_lab::quad::{integrate, QuadOptions};
use trap_lab::scenario::Scenario;
use trap_lab::specfun::{airy_ai_zero, airy_eval, bessel_j};
use trap_lab::tunneling::{barrier_rate, BarrierGeometry};

fn params() -> impl Strategy<Value = DimensionlessParams> {
    (0.5f64..6.0, -2.0f64..2.0, 1e-4f64..2e-2, 0.2f64..1.0, 0i32..5, any::<bool>()).prop_map(|(a, b, r, k, m, neg)| {
        let s = if neg { -1.0 } else { 1.0 };
        DimensionlessParams::new(s * a, b, s * a * r, k, m)
    })
}

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Paraxial), Just(Variant::Full)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn eigendecomposition_identities(p in params(), v in variant(), xi in 0.05f64..50.0) {
        let grid: Vec<f64> = (0..8).map(|i| xi + i as f64 * 1e-3).collect();
        let dec = decompose(&grid, &p, v).unwrap();
        for i in 0..grid.len() {
            let s = potential_matrix(grid[i], &p, v).unwrap();
            let scale = s.v11.abs().max(s.v22.abs()).max(s.v12.abs()).max(1.0);
            let (vp, vm) = (dec.v_plus[i], dec.v_minus[i]);
            prop_assert!((vp + vm - s.trace()).abs() < 1e-12 * scale);
            prop_assert!((vp * vm - s.det()).abs() < 1e-12 * scale * scale);
            prop_assert!(dec.lambda[i] >= dec.theta[i].abs());
            prop_assert!(vp >= vm);
            let (a, b) = (dec.chi_plus[i], dec.chi_minus[i]);
            prop_assert!((a[0] * a[0] + a[1] * a[1] - 1.0).abs() < 1e-12);
            prop_assert!((b[0] * b[0] + b[1] * b[1] - 1.0).abs() < 1e-12);
            prop_assert!((a[0] * b[0] + a[1] * b[1]).abs() < 1e-12);
            let mv = |x: [f64; 2]| [s.v11 * x[0] + s.v12 * x[1], s.v12 * x[0] + s.v22 * x[1]];
            let dot = |x: [f64; 2], y: [f64; 2]| x[0] * y[0] + x[1] * y[1];
            prop_assert!((dot(a, mv(a)) - vp).abs() < 1e-12 * scale);
            prop_assert!((dot(b, mv(b)) - vm).abs() < 1e-12 * scale);
            prop_assert!(dot(a, mv(b)).abs() < 1e-12 * scale);
            if i > 0 {
                prop_assert!(dot(dec.chi_plus[i - 1], a) > 0.0);
                prop_assert!(dot(dec.chi_minus[i - 1], b) > 0.0);
            }
        }
    }

    #[test]
    fn airy_wronskian(x in -150.0f64..100.0) {
        let q = airy_eval(x).unwrap();
        let w = q.ai * q.bi_prime - q.ai_prime * q.bi;
        prop_assert!((w * std::f64::consts::PI - 1.0).abs() < 1e-10, "x = {x}: {w}");
    }

    #[test]
    fn bessel_recurrence(n in 1i32..30, x in 0.1f64..80.0) {
        let (a, b, c) = (bessel_j(n - 1, x).unwrap(), bessel_j(n, x).unwrap(), bessel_j(n + 1, x).unwrap());
        let lhs = a + c;
        let rhs = 2.0 * n as f64 / x * b;
        prop_assert!((lhs - rhs).abs() < 1e-10 * (a.abs() + c.abs()).max(1e-300) + 1e-14);
    }

    #[test]
    fn theta_bound_monotone(d in 0.1f64..5.0, gap in 1e-3f64..1.0, dd in 1e-3f64..1.0, dg in 1e-3f64..0.5) {
        let p = DimensionlessParams::preset("set1").unwrap();
        let g = |xi_d: f64, gap: f64| BarrierGeometry {
            energy: 0.7, v_max: 0.7 + gap, v_min: 0.5, xi_left: 1.0, xi_right: 2.0,
            xi_outer: 2.0 + xi_d, xi_d, xi_at_max: 2.5,
        };
        let base = barrier_rate(&g(d, gap), &p).unwrap();
        prop_assert!(barrier_rate(&g(d + dd, gap), &p).unwrap().theta_bound < base.theta_bound);
        prop_assert!(barrier_rate(&g(d, gap + dg), &p).unwrap().theta_bound < base.theta_bound);
        prop_assert!((base.rate - base.theta_bound * base.hits_per_omega).abs() <= 1e-15 * base.rate);
    }

    #[test]
    fn fifteen_digit_rounding(x in proptest::num::f64::NORMAL) {
        let r = round_sig(x);
        prop_assert_eq!(round_sig(r), r);
        prop_assert!((r - x).abs() <= 5.1e-15 * x.abs());
        prop_assert_eq!(fmt_num(x).parse::<f64>().unwrap(), r);
    }

    #[test]
    fn scenario_roundtrip(p in params(), v in variant()) {
        let text = format!(
            r#"{{"id":"p","alpha":{},"beta":{},"gamma":{},"kappa_z":{},"m":{},"variant":"{}"}}"#,
            p.alpha, p.beta, p.gamma, p.kappa_z, p.m, v
        );
        let s = Scenario::from_json(&text).unwrap();
        prop_assert_eq!(s.params, p);
        prop_assert_eq!(s.variant, v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn spin_stays_unit(beta in -0.05f64..0.05, r0 in 1.0f64..3.0) {
        let m = ClassicalModel::new(&DimensionlessParams::new(-2.0, beta, -0.02, 0.9, 2)).unwrap();
        let s0 = tuned_initial_state(&m, r0).unwrap();
        for s in integrate_trajectory(&s0, &m, 1e-2, 2000).unwrap() {
            let n = s.spin_dir;
            prop_assert!(((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn airy_mode_normalisation_identity() {
    for n in 1..=5 {
        let z = airy_ai_zero(n).unwrap();
        let ap = airy_eval(z).unwrap().ai_prime;
        let opts = QuadOptions { initial_panels: 32, ..Default::default() };
        let i = integrate(|t| airy_eval(t + z).unwrap().ai.powi(2), 0.0, 40.0, opts).unwrap().value;
        assert!((i - ap * ap).abs() < 1e-8 * ap * ap, "zero {n}: {i} vs {}", ap * ap);
    }
}
