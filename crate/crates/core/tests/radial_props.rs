mod common;

use common::{allen_cahn_radial, linear_radial};
use proptest::prelude::*;
use trunclap_core::models::{make_allen_cahn, make_power_family, Nonlinearity, ALLEN_CAHN_DELTA};
use trunclap_core::radial::{check_ordering, integrate_ivp, quadrature_inverse};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rk4_matches_closed_form(alpha in 0.05f64..ALLEN_CAHN_DELTA, k in 1usize..4) {
        let f = make_allen_cahn();
        let run = integrate_ivp(&f, alpha, k, 1e-3, 6.0).unwrap();
        for s in run.samples.iter().step_by(97) {
            prop_assert!((s.v - allen_cahn_radial(alpha, k as f64, s.r)).abs() <= 1e-9);
        }
        prop_assert!(run.diagnostics.monotone_decreasing && run.diagnostics.positive);
        prop_assert!(check_ordering(&run, &f).holds);
    }

    #[test]
    fn profiles_do_not_cross(a1 in 0.05f64..0.5, gap in 0.01f64..0.07, k in 1usize..3) {
        let f = make_allen_cahn();
        let lo = integrate_ivp(&f, a1, k, 2e-3, 8.0).unwrap();
        let hi = integrate_ivp(&f, a1 + gap, k, 2e-3, 8.0).unwrap();
        for (a, b) in lo.samples.iter().zip(&hi.samples) {
            prop_assert!(a.v < b.v, "crossing at r={}", a.r);
        }
    }

    #[test]
    fn power_family_profiles_decay(a in 0.2f64..2.0, b in 0.0f64..2.0, gamma in 1.5f64..3.0, alpha in 0.05f64..0.9) {
        let f = make_power_family(a, b, gamma).unwrap();
        let run = integrate_ivp(&f, alpha, 1, 2e-3, 8.0).unwrap();
        prop_assert!(run.diagnostics.monotone_decreasing && run.diagnostics.positive);
        // v' ≤ −(r/k)·a·v forces v(r) ≤ α e^{−a r²/2}
        for s in run.samples.iter().step_by(50) {
            prop_assert!(s.v <= alpha * (-a * s.r * s.r / 2.0).exp() + 1e-9);
        }
        let last = run.samples.last().unwrap();
        let inv = quadrature_inverse(&f, alpha, 1, last.r).unwrap();
        prop_assert!((inv - last.v).abs() <= 1e-8 + 1e-6 * last.v, "{inv} vs {}", last.v);
    }
}

#[test]
fn linear_oracle_across_k() {
    let f = Nonlinearity::linear(1.0);
    for k in 1..=3 {
        let run = integrate_ivp(&f, 0.7, k, 1e-3, 10.0).unwrap();
        let err = run
            .samples
            .iter()
            .map(|s| (s.v - linear_radial(0.7, k as f64, s.r)).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-10, "k={k}: {err}");
    }
}

#[test]
fn quadrature_matches_closed_form_far_out() {
    let f = make_allen_cahn();
    for &(alpha, k) in &[(0.1, 1usize), (0.5, 2), (ALLEN_CAHN_DELTA, 1)] {
        for r in [0.0, 0.5, 2.0, 5.0, 10.0] {
            let q = quadrature_inverse(&f, alpha, k, r).unwrap();
            let exact = allen_cahn_radial(alpha, k as f64, r);
            assert!((q - exact).abs() <= 1e-12 + 1e-9 * exact, "alpha={alpha} k={k} r={r}: {q} vs {exact}");
        }
    }
}
