use edes_core::exponents::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn k_grid() -> impl Iterator<Item = f64> {
    (0..10).map(|i| f64::from(i) / 10.0)
}

#[test]
fn both_quadratic_forms_agree() {
    for k in k_grid() {
        for n in 1..=12 {
            let n = f64::from(n);
            let a = critical_exponent_p0(n, k).unwrap();
            let b = critical_exponent_p0_second_form(n, k).unwrap();
            assert!((a - b).abs() <= 1e-12, "n={n} k={k}: {a} vs {b}");
            assert!(a > 1.0);
        }
    }
}

#[test]
fn p0_critical_identity() {
    for k in k_grid() {
        for n in 1..=12 {
            let n = f64::from(n);
            let p0 = critical_exponent_p0(n, k).unwrap();
            assert!((p0_identity_lhs(n, k, p0) + 1.0 / (1.0 - k)).abs() <= 1e-10);
        }
    }
}

#[test]
fn orderings_hold_on_grid() {
    for k in k_grid() {
        let th = thresholds(k).unwrap();
        assert!(th.n_tilde < th.n_k && th.n_k < th.n_hat, "k={k}");
        for n in 1..=12 {
            let n = f64::from(n);
            let (p0, p1v, p2v) = (critical_exponent_p0(n, k).unwrap(), p1(n, k), p2(n, k));
            if (n - th.n_k).abs() <= 1e-9 {
                assert!(
                    (p0 - p1v).abs() <= 1e-9 && (p0 - p2v).abs() <= 1e-9,
                    "n={n} k={k}"
                );
            } else if n < th.n_k {
                assert!(p2v < p0 && p0 < p1v, "n={n} k={k}");
            } else {
                assert!(p1v < p0 && p0 < p2v, "n={n} k={k}");
            }
        }
        let n = th.n_k;
        let p0 = critical_exponent_p0(n, k).unwrap();
        assert!((p0 - p1(n, k)).abs() <= 1e-9);
        assert!((p0 - p2(n, k)).abs() <= 1e-9);
        assert!((p0 - p3(n, k)).abs() <= 1e-9);
    }
}

#[test]
fn kato_sign_equivalences_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counterexamples = 0;
    for _ in 0..10_000 {
        let n: f64 = rng.gen_range(1.0..12.0);
        let k: f64 = rng.gen_range(0.0..0.95);
        let p: f64 = rng.gen_range(1.0001..6.0);
        let q = kato_quantities(n, k, p).unwrap();
        let (p0, p1v) = (critical_exponent_p0(n, k).unwrap(), p1(n, k));
        assert_eq!(q.m1 > 0.0, p < p1v, "n={n} k={k} p={p}");
        assert_eq!(q.m2 > 0.0, p < p0, "n={n} k={k} p={p}");
        assert!((q.m2 - q.theta / 2.0).abs() <= 1e-12 * q.theta.abs().max(1.0));
        let lhs = ((1.0 - k) * n - 1.0) * p;
        let rhs = 2.0 * (1.0 - k);
        if (lhs - rhs).abs() > 1e-9 {
            assert_eq!(q.a1 >= q.a2, lhs <= rhs, "n={n} k={k} p={p}");
        }
        if q.m1.max(q.m2) > 0.0 && q.a1.max(q.a2) <= 1.0 {
            counterexamples += 1;
        }
    }
    assert_eq!(counterexamples, 0);
}

#[test]
fn m1_vanishes_at_p1() {
    for k in k_grid() {
        for n in 1..=6 {
            let n = f64::from(n);
            assert!(kato_quantities(n, k, p1(n, k)).unwrap().m1.abs() <= 1e-10);
        }
    }
}

#[test]
fn subcritical_sweep_exponents() {
    let c = classify_lifespan(1.0f64, 0.0, 2.0).unwrap();
    assert_eq!(c.regime, Regime::SubP1);
    assert!((c.law.unwrap().exponent - 1.0).abs() < 1e-14);
    // Second-critical equivalence ((1-k)n+1)(p-1) = p+1 at p = p₁.
    for k in k_grid() {
        for n in 1..=8 {
            let n = f64::from(n);
            let p = p1(n, k);
            assert!((((1.0 - k) * n + 1.0) * (p - 1.0) - (p + 1.0)).abs() <= 1e-12 * (p + 1.0));
        }
    }
}

#[test]
fn report_is_consistent() {
    let r = exponent_report(3.0f64, 2.0 / 3.0, Some(2.0)).unwrap();
    assert!((r.p0 - 2.786_300).abs() < 1e-6);
    assert!((r.p1 - 3.0).abs() < 1e-12);
    assert!((r.thresholds.n_k_variant - 3.5).abs() < 1e-12);
    assert!(r.thresholds.n_k > 3.0);
    assert_eq!(r.classification.unwrap().regime, Regime::SubP1);
    assert!(exponent_report(0.5, 0.2, None).is_err());
}

proptest! {
    #[test]
    fn p3_above_one_iff_between_thresholds(n in 1.0f64..12.0, k in 0.0f64..0.95) {
        let th = thresholds(k).unwrap();
        let v = p3(n, k);
        prop_assume!((n - th.n_tilde).abs() > 1e-9 && (n - th.n_hat).abs() > 1e-9);
        prop_assert_eq!(v > 1.0 && v.is_finite(), th.n_tilde < n && n < th.n_hat);
    }

    #[test]
    fn thresholds_are_ordered(k in 0.0f64..0.999) {
        let th = thresholds(k).unwrap();
        prop_assert!(th.n_tilde < th.n_k && th.n_k < th.n_hat);
    }

    #[test]
    fn classification_law_is_positive(n in 1.0f64..10.0, k in 0.0f64..0.95, frac in 0.01f64..0.99) {
        let crit = critical_exponent_p0(n, k).unwrap().max(p1(n, k));
        let p = 1.0 + frac * (crit - 1.0);
        let c = classify_lifespan(n, k, p).unwrap();
        prop_assert!(c.regime != Regime::SupercriticalUnknown);
        prop_assert!(c.law.unwrap().exponent > 0.0);
    }

    #[test]
    fn p3_ordering_matches_dimension(n in 1.0f64..12.0, k in 0.0f64..0.95) {
        let th = thresholds(k).unwrap();
        prop_assume!(n > th.n_tilde + 1e-6 && (n - th.n_k).abs() > 1e-6);
        let (p0, p1v, p3v) = (critical_exponent_p0(n, k).unwrap(), p1(n, k), p3(n, k));
        prop_assert_eq!(p1v < p3v && p0 < p3v, n < th.n_k);
    }
}
