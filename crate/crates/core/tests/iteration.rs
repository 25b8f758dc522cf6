use edes_core::iteration::*;
use edes_core::kernels::SpacetimeParams;
use num::rational::BigRational;
use num::BigInt;
use proptest::prelude::*;

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn recursion_matches_closed_form_exactly() {
    for p in [rat(3, 2), rat(2, 1), rat(5, 2), rat(3, 1)] {
        let a = alpha_recursion(&p, 30);
        let b = beta_recursion(&p, 30);
        for j in 0..=30 {
            assert_eq!(a[j], alpha_closed(&p, j), "alpha p={p} j={j}");
            assert_eq!(b[j], beta_closed(&p, j), "beta p={p} j={j}");
        }
        for case in [IterationCase::CritP0, IterationCase::CritP1] {
            let s = slicing_sequences(case, &p, 30).unwrap();
            assert!(s.closed_form_agrees);
            assert_eq!(s.alpha.len(), 31);
        }
    }
}

#[test]
fn sigma_recursion_is_sigma_p_plus_one() {
    // σ_{j+1} = σ_j p + 1 written the other way round
    let p = rat(5, 2);
    let s = slicing_sequences(IterationCase::CritP1, &p, 30).unwrap();
    for j in 0..30 {
        assert_eq!(s.alpha[j + 1], s.alpha[j].clone() * p.clone() + rat(1, 1));
    }
}

#[test]
fn summation_identity_exact() {
    for p in [rat(2, 1), rat(3, 1), rat(5, 2)] {
        for j in 0..=25 {
            assert_eq!(
                weighted_power_sum(&p, j),
                weighted_power_sum_closed(&p, j),
                "p={p} j={j}"
            );
        }
    }
}

#[test]
fn ell_properties() {
    let e: Vec<BigRational> = (0..=61).map(ell).collect();
    assert_eq!(e[0], rat(3, 2));
    for j in 0..=60 {
        assert!(e[j] < e[j + 1] && e[j + 1] < rat(2, 1));
        let gap = rat(1, 1) - e[j].clone() / e[j + 1].clone();
        let bound = BigRational::new(BigInt::from(1), num::pow(BigInt::from(2), j + 3));
        assert!(gap > bound, "j={j}");
    }
}

#[test]
fn j_max_limit_and_bad_p() {
    assert!(slicing_sequences(IterationCase::CritP0, &rat(2, 1), 61).is_err());
    assert!(slicing_sequences(IterationCase::CritP0, &rat(1, 1), 3).is_err());
    assert!(slicing_sequences(IterationCase::CritP0, &rat(3, 1), 60).is_ok());
}

#[test]
fn thresholds_invert_j_and_h() {
    for p in [1.5f64, 2.0, 2.5, 3.0] {
        for log_e in [-3.0f64, 0.0, 1.0] {
            for eps in [0.9f64, 0.5, 0.3] {
                let t = lifespan_threshold_crit_p0(eps, p, log_e).unwrap();
                assert!((j_function(t.log_time, eps, p, log_e) - 1.0).abs() <= 1e-10);
                let t = lifespan_threshold_crit_p1(eps, p, log_e).unwrap();
                assert!((h_function(t.log_time, eps, p, log_e) - 1.0).abs() <= 1e-10);
                assert!(h_function(t.log_time * 1.01, eps, p, log_e) > 1.0);
            }
        }
    }
}

#[test]
fn threshold_ratio_under_halving() {
    let (p, log_e, eps) = (2.0f64, 0.3, 0.8);
    let a = lifespan_threshold_crit_p0(eps, p, log_e).unwrap();
    let b = lifespan_threshold_crit_p0(eps / 2.0, p, log_e).unwrap();
    let predicted = a.log_time * (2f64.powf(p * (p - 1.0)) - 1.0);
    assert!(((b.log_time - a.log_time) - predicted).abs() <= 1e-12 * b.log_time);
    let t = lifespan_threshold_crit_p1(0.25f64, 3.0, 0.0).unwrap();
    assert!((t.log_time - 32.0).abs() < 1e-12);
}

#[test]
fn gamma_k_inequality() {
    for i in 1..=9 {
        let params = SpacetimeParams::new(f64::from(i) / 10.0, 3).unwrap();
        for m in 0..=600 {
            let t = 10f64.powf(f64::from(m) / 100.0);
            let margin = gamma_k_margin(&params, t);
            assert!(margin >= -1e-12 * t, "k={} t={t} margin={margin}", params.k);
        }
        assert!(t0(&params).unwrap() >= 4.0);
    }
}

#[test]
fn log_c_lower_bound_beyond_j0() {
    for &(p, eps, c, g, m) in &[
        (2.0f64, 0.5, 1.0, 0.3, 1.0),
        (3.0, 0.1, 0.2, 0.5, 2.0),
        (1.5, 0.9, 5.0, 0.1, 0.5),
        (2.5, 0.05, 40.0, 0.8, 0.01),
    ] {
        let consts = CritP0Constants {
            c_frame: c,
            gamma_k: g,
            m_const: m,
        };
        let log_c = log_c_sequence(&consts, p, eps, 40);
        let log_e = consts.log_e(p);
        let j0 = consts.j0(p) as usize;
        for j in j0..=40 {
            let rhs = p.powi(j as i32) * (log_e + p * eps.ln());
            assert!(
                log_c[j] >= rhs - 1e-9 * rhs.abs().max(1.0),
                "p={p} j={j}: {} < {rhs}",
                log_c[j]
            );
        }
    }
}

#[test]
fn log_k_lower_bound_beyond_j1() {
    // same estimate in the second critical case: log K_j >= p^j log(N ε^p)
    for &(p, eps, c, k, r) in &[
        (2.0f64, 0.5, 1.0, 1.0, 1.0),
        (3.0, 0.2, 4.0, 0.5, 2.0),
        (1.5, 0.7, 0.3, 2.0, 0.5),
    ] {
        let consts = CritP1Constants {
            c_frame: c,
            k_const: k,
            r_support: r,
        };
        let log_k = log_k_sequence(&consts, p, eps, 40);
        let log_n = consts.log_n(p);
        for j in consts.j1(p) as usize..=40 {
            let rhs = p.powi(j as i32) * (log_n + p * eps.ln());
            assert!(log_k[j] >= rhs - 1e-9 * rhs.abs().max(1.0), "p={p} j={j}");
        }
    }
}

#[test]
fn trace_serializes_exact_sequences() {
    let consts = CritP0Constants {
        c_frame: 1.0f64,
        gamma_k: 0.5,
        m_const: 1.0,
    };
    let tr = iteration_trace_p0(&consts, 2.0, 0.5, 5).unwrap();
    assert_eq!(tr.alpha, ["1", "3", "7", "15", "31", "63"]);
    assert_eq!(tr.beta, ["0", "1", "3", "7", "15", "31"]);
    assert!(tr.closed_form_agrees);
    let consts = CritP1Constants {
        c_frame: 1.0f64,
        k_const: 1.0,
        r_support: 1.0,
    };
    let tr = iteration_trace_p1(&consts, 1.5, 0.5, 3).unwrap();
    assert_eq!(tr.alpha, ["1", "5/2", "19/4", "65/8"]);
    assert!(tr.beta.is_empty());
}

#[test]
fn linear_growth_reproduces_t_log_shape() {
    // U(τ) = K ε τ inserted in the second-critical frame
    let (p, r, c, k, eps) = (2.0f64, 1.0f64, 1.0f64, 0.7f64, 0.3f64);
    let ts: Vec<f64> = (0..4001).map(|i| 1.0 + f64::from(i) * 0.01).collect();
    let inner: Vec<f64> = ts
        .iter()
        .map(|&t| (r + t).powf(-(p + 1.0)) * (k * eps * t).powf(p))
        .collect();
    let once = edes_core::quadrature::cumulative_trapezoid(&ts, &inner);
    let twice = edes_core::quadrature::cumulative_trapezoid(&ts, &once);
    let coeff = c * k.powf(p) * (r + 1.0).powf(-(p + 1.0)) * eps.powf(p) / 3.0;
    for (i, &t) in ts.iter().enumerate().filter(|(_, &t)| t >= 1.5) {
        let lower = coeff * t * (2.0 * t / 3.0).ln();
        assert!(c * twice[i] >= lower * (1.0 - 1e-6), "t={t}");
    }
    let last = ts.len() - 1;
    let ratio = twice[last] / (ts[last] * (2.0 * ts[last] / 3.0).ln());
    assert!(ratio > 0.0 && ratio.is_finite());
}

#[test]
fn frame_checks_on_synthetic_series() {
    let params = SpacetimeParams::new(2.0f64 / 3.0, 3).unwrap();
    let ts: Vec<f64> = (0..64).map(|i| 1.0 + f64::from(i) * 0.05).collect();
    let vals: Vec<f64> = ts.iter().map(|t| 0.1 * t * t).collect();
    let c0 = frame_check_p0(&ts, &vals, &params, 2.0).unwrap();
    assert!(c0.c_frame > 0.0 && c0.c_frame.is_finite());
    let c1 = frame_check_p1(&ts, &vals, 2.0, 1.0).unwrap();
    assert!(c1.c_frame > 0.0 && c1.c_frame.is_finite());
}

#[test]
fn kato_side_condition_branches() {
    let input = KatoInput {
        p: 2.0f64,
        a: 3.0,
        q: 2.0,
        amp_a: 4.0,
        amp_b: 1.0,
        r: 1.0,
        t0: 1.0,
        tau: 1.0,
    };
    let t1 = kato_t1(1.0, 2.0, 1.0, 1.0);
    assert_eq!(t1, 2.0);
    let o = kato_evaluate(&input, t1, Some(1.0)).unwrap();
    assert_eq!(o.side_condition_holds, Some(true));
    let o = kato_evaluate(&input, t1, Some(1e6)).unwrap();
    assert_eq!(o.side_condition_holds, Some(false));
    assert!(kato_evaluate(&KatoInput { p: 0.5, ..input }, t1, None).is_err());
}

proptest! {
    #[test]
    fn alpha_closed_form_any_rational(num in 3i64..40, den in 1i64..8, j in 0usize..20) {
        prop_assume!(num > den);
        let p = rat(num, den);
        let a = alpha_recursion(&p, j);
        prop_assert_eq!(&a[j], &alpha_closed(&p, j));
        prop_assert_eq!(&beta_recursion(&p, j)[j], &beta_closed(&p, j));
    }

    #[test]
    fn thresholds_decrease_in_eps(p in 1.1f64..4.0, log_e in -2.0f64..2.0, eps in 0.05f64..0.9) {
        let a = lifespan_threshold_crit_p0(eps, p, log_e).unwrap();
        let b = lifespan_threshold_crit_p0(eps * 1.1, p, log_e).unwrap();
        prop_assert!(b.log_time < a.log_time);
        let a = lifespan_threshold_crit_p1(eps, p, log_e).unwrap();
        let b = lifespan_threshold_crit_p1(eps * 1.1, p, log_e).unwrap();
        prop_assert!(b.log_time < a.log_time);
    }

    #[test]
    fn kato_m_formula(p in 1.01f64..5.0, a in 0.01f64..5.0, q in 0.01f64..5.0) {
        let input = KatoInput { p, a, q, amp_a: 1.0, amp_b: 1.0, r: 1.0, t0: 1.0, tau: 1.0 };
        let o = kato_evaluate(&input, 3.0, None).unwrap();
        prop_assert!((o.m - ((p - 1.0) / 2.0 * a - q / 2.0 + 1.0)).abs() < 1e-12);
        prop_assert_eq!(o.applicable, o.m > 0.0);
        if let Some(b) = o.bound { prop_assert!(b > 3.0); }
    }
}
