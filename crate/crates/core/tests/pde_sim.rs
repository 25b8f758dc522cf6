use edes_core::exponents::{critical_exponent_p0, p1, LawKind, LifespanLaw};
use edes_core::iteration::{iteration_frame_check, IterationCase};
use edes_core::kernels::SpacetimeParams;
use edes_core::pde_sim::*;
use edes_core::Error;
use proptest::prelude::*;

fn two_thirds() -> SpacetimeParams<f64> {
    SpacetimeParams::new(2.0 / 3.0, 3).unwrap()
}

fn linear(cfg: SimConfig<f64>) -> SimConfig<f64> {
    SimConfig {
        nonlinear: false,
        ..cfg
    }
}

#[test]
fn zero_data_stays_zero() {
    let cfg = SimConfig::new(two_thirds(), 2.0, 0.0, 30.0)
        .unwrap()
        .with_frame_aux()
        .unwrap();
    let r = run(&cfg).unwrap();
    assert!(!r.blew_up && r.t_num.is_none());
    assert_eq!(r.t_end, 30.0);
    for d in &r.diagnostics {
        assert_eq!(d.max_u, 0.0);
        assert_eq!(d.u_integral, 0.0);
        assert_eq!(d.curly_u, Some(0.0));
    }
    assert_eq!(r.weak_residual, 0.0);
    assert_eq!(weak_residual(&r, WeakTest::OneOnCone).unwrap(), 0.0);
}

#[test]
fn functional_u_matches_dense_oracle() {
    let dr = 1e-5;
    let profile = DataProfile::bump(1.0f64);
    let eps = 0.3;
    let u: Vec<f64> = (0..=100_000)
        .map(|i| eps * profile.value(f64::from(i) * dr))
        .collect();
    let got = functional_u(3, dr, &u);
    let panels = 1_000_000;
    let h = 1.0 / f64::from(panels);
    let oracle: f64 = (0..panels)
        .map(|i| {
            let r = (f64::from(i) + 0.5) * h;
            eps * profile.value(r) * r * r
        })
        .sum::<f64>()
        * h
        * 4.0
        * std::f64::consts::PI;
    assert!((got - oracle).abs() <= 1e-8 * oracle, "{got} vs {oracle}");
    assert!((oracle - eps * 4.0 * std::f64::consts::PI * 128.0 / 3465.0).abs() < 1e-10);
    assert_eq!(functional_u(3, dr, &[0.0; 10]), 0.0);
}

#[test]
fn support_tail_converges_to_cone() {
    // The absolute 1e-12 floor sits far below the O(dr^4) front error; the
    // excess shrinks in physical units under refinement.
    let mut excess = Vec::new();
    for dr in [0.02, 0.01, 0.005] {
        let cfg = linear(
            SimConfig::new(two_thirds(), 2.0, 0.3, 20.0)
                .unwrap()
                .with_dr(dr),
        );
        let r = run(&cfg).unwrap();
        excess.push(r.max_cone_excess);
    }
    assert!(excess[0] > excess[1] && excess[1] > excess[2], "{excess:?}");
    // At a floor relative to the amplitude the support stays within 2dr.
    let mut cfg = linear(SimConfig::new(two_thirds(), 2.0, 0.3, 20.0).unwrap());
    cfg.support_floor = 1e-4 * cfg.eps;
    let r = run(&cfg).unwrap();
    assert!(
        r.max_cone_excess <= 2.0 * cfg.dr,
        "excess {}",
        r.max_cone_excess
    );
}

#[test]
fn blowup_time_decreases_with_eps() {
    let mut last = 0.0;
    for eps in [0.4, 0.2, 0.1] {
        let cfg = SimConfig::new(two_thirds(), 2.0, eps, 20_000.0).unwrap();
        let r = run(&cfg).unwrap();
        assert!(r.blew_up, "eps={eps}");
        let t = r.t_num.unwrap();
        assert!(t > last, "eps={eps}: {t} <= {last}");
        assert!(r.refinement_agreement.unwrap() <= REFINEMENT_TOLERANCE);
        assert!(
            (r.uncertainty.unwrap() - (r.refinement_agreement.unwrap() * t).abs()).abs() < 0.1 * t
        );
        last = t;
    }
}

#[test]
fn thresholds_recorded_in_order() {
    let cfg = SimConfig {
        refine: false,
        ..SimConfig::new(two_thirds(), 2.0, 0.4, 20_000.0).unwrap()
    };
    let r = run(&cfg).unwrap();
    let times: Vec<f64> = r.threshold_times.iter().map(|c| c.time.unwrap()).collect();
    assert_eq!(r.threshold_times.len(), 3);
    assert!(times.windows(2).all(|w| w[0] <= w[1]));
    assert!((times[2] - times[0]) / times[2] < 0.01, "{times:?}");
    assert_eq!(r.t_num, Some(times[1]));
}

#[test]
fn u_convex_and_matches_power_integral() {
    let cfg = SimConfig {
        refine: false,
        diagnostic_every: 4,
        ..SimConfig::new(two_thirds(), 2.0, 0.3, 2000.0).unwrap()
    };
    let r = run(&cfg).unwrap();
    let t_num = r.t_num.unwrap();
    let rows: Vec<_> = r.pre_blowup().collect();
    assert!(rows.windows(2).all(|w| w[1].u_integral >= w[0].u_integral));
    let ts: Vec<f64> = rows.iter().map(|d| d.t).collect();
    let us: Vec<f64> = rows.iter().map(|d| d.u_integral).collect();
    for (i, (t, upp)) in second_derivative(&ts, &us).into_iter().enumerate() {
        assert!(upp >= -1e-12, "t={t}");
        if t < 0.5 * t_num {
            let exact = t.powf(1.0 - cfg.p) * rows[i + 1].power_integral;
            assert!(
                (upp - exact).abs() <= 1e-2 * exact,
                "t={t}: {upp} vs {exact}"
            );
        }
    }
    let c = fit_differential_inequality(&r).unwrap();
    assert!(c.value > 0.0);
}

#[test]
fn linear_refinement_is_second_order() {
    let x: Vec<f64> = [0.02, 0.01, 0.005, 0.0025]
        .iter()
        .map(|&dr| {
            let r = run(&linear(
                SimConfig::new(two_thirds(), 2.0, 0.3, 10.0)
                    .unwrap()
                    .with_dr(dr),
            ))
            .unwrap();
            r.diagnostics.last().unwrap().power_integral
        })
        .collect();
    for i in 0..2 {
        let ratio = (x[i] - x[i + 1]).abs() / (x[i + 1] - x[i + 2]).abs();
        assert!((3.0..6.0).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn linear_energy_does_not_grow() {
    let r = run(&linear(
        SimConfig::new(two_thirds(), 2.0, 0.3, 50.0).unwrap(),
    ))
    .unwrap();
    assert!(r.energy_growth.unwrap() <= 1.0 + 1e-6);
}

#[test]
fn weak_residual_one_on_cone() {
    for dr in [0.02, 0.01] {
        let r = run(&linear(
            SimConfig::new(two_thirds(), 2.0, 0.3, 10.0)
                .unwrap()
                .with_dr(dr),
        ))
        .unwrap();
        assert!(r.weak_residual <= 1e-10, "dr={dr}: {}", r.weak_residual);
    }
    let r = run(&SimConfig::new(SpacetimeParams::new(0.0, 1).unwrap(), 2.0, 0.3, 100.0).unwrap())
        .unwrap();
    assert!(r.weak.source_integral > 0.0);
    assert!(r.weak_residual <= 1e-10);
}

#[test]
fn kernel_identity_within_scheme_error() {
    let mut res = Vec::new();
    let mut lhs = Vec::new();
    for dr in [0.01, 0.005] {
        let mut cfg = SimConfig::new(two_thirds(), 2.0, 0.3, 2.0)
            .unwrap()
            .with_dr(dr);
        cfg.kernel_test_lambda = Some(1.0);
        let r = run(&cfg).unwrap();
        assert_eq!(r.weak.t, 2.0);
        res.push(weak_residual(&r, WeakTest::KernelTest).unwrap());
        lhs.push(r.weak.kernel.unwrap().lhs);
    }
    let scheme_error = (lhs[0] - lhs[1]).abs() / lhs[1].abs();
    assert!(res[0] <= 3.0 * scheme_error, "{} vs {scheme_error}", res[0]);
    assert!(res[1] < res[0]);
    let plain = run(&SimConfig::new(two_thirds(), 2.0, 0.3, 2.0).unwrap()).unwrap();
    assert!(weak_residual(&plain, WeakTest::KernelTest).is_err());
}

#[test]
fn functionals_on_simulated_runs() {
    let p0 = critical_exponent_p0(3.0, 2.0 / 3.0).unwrap();
    let cases = [
        (two_thirds(), p0),
        (two_thirds(), 2.0),
        (SpacetimeParams::new(0.0, 1).unwrap(), 2.0),
    ];
    for (params, p) in cases {
        let cfg = SimConfig::new(params, p, 0.3, 40.0)
            .unwrap()
            .with_frame_aux()
            .unwrap();
        let r = run(&cfg).unwrap();
        let floor = fit_curly_u_floor(&r).unwrap();
        assert!(floor.value > 0.0 && floor.samples >= 16);
        assert!(fit_first_log_bound(&r).unwrap().value > 0.0);
        assert!(fit_linear_growth(&r).unwrap().value > 0.0);
        let frame = iteration_frame_check(&r, IterationCase::CritP0).unwrap();
        assert!(frame.c_frame > 0.0 && frame.c_frame.is_finite());
        let fitted = fitted_constants(&r, Some(&frame));
        assert!(fitted.all_positive());
        let frame1 = iteration_frame_check(&r, IterationCase::CritP1).unwrap();
        assert!(frame1.c_frame > 0.0);
    }
}

#[test]
fn frame_check_needs_curly_u() {
    let r = run(&SimConfig::new(two_thirds(), 2.0, 0.3, 20.0).unwrap()).unwrap();
    assert!(matches!(
        iteration_frame_check(&r, IterationCase::CritP0),
        Err(Error::InsufficientData(_))
    ));
    let short = run(&SimConfig {
        diagnostic_every: 10_000,
        ..SimConfig::new(two_thirds(), 2.0, 0.3, 5.0).unwrap()
    })
    .unwrap();
    assert!(matches!(
        iteration_frame_check(&short, IterationCase::CritP1),
        Err(Error::SeriesTooShort { .. })
    ));
}

#[test]
fn cone_violation_and_instability_reported() {
    let mut cfg = linear(SimConfig::new(two_thirds(), 2.0, 0.3, 20.0).unwrap());
    cfg.r_max = 1.0 + cfg.params.light_cone_a(20.0) + 0.03;
    assert!(matches!(run(&cfg), Err(Error::ConeViolation { .. })));
    let cfg = SimConfig {
        cfl: 0.95,
        ..SimConfig::new(two_thirds(), 2.0, 0.3, 20.0).unwrap()
    };
    assert!(matches!(run(&cfg), Err(Error::Instability { .. })));
}

#[test]
fn invalid_configs_rejected() {
    let base = SimConfig::new(two_thirds(), 2.0, 0.3, 20.0).unwrap();
    assert!(SimConfig {
        cfl: 1.0,
        ..base.clone()
    }
    .validate()
    .is_err());
    assert!(SimConfig {
        p: 1.0,
        ..base.clone()
    }
    .validate()
    .is_err());
    assert!(SimConfig {
        r_max: 2.0,
        ..base.clone()
    }
    .validate()
    .is_err());
    assert!(SimConfig {
        eps: -0.1,
        ..base.clone()
    }
    .validate()
    .is_err());
    assert!(SimConfig { dr: 0.0, ..base }.validate().is_err());
}

#[test]
fn config_json_defaults_and_roundtrip() {
    let json = r#"{"params":{"k":0.5,"n":3},"p":2.0,"eps":0.2,"data_profile":{"kind":"truncated_gaussian","radius":1.0},"r_max":40.0,"dr":0.01,"t_max":50.0}"#;
    let cfg: SimConfig<f64> = serde_json::from_str(json).unwrap();
    assert_eq!(cfg.cfl, 0.5);
    assert_eq!(cfg.blowup_amplitude, 1e6);
    assert_eq!(cfg.diagnostic_every, 32);
    assert!(cfg.nonlinear && cfg.refine && cfg.aux.is_none());
    cfg.validate().unwrap();
    let back: SimConfig<f64> = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(back, cfg);
    assert!(
        serde_json::from_str::<SimConfig<f64>>(&json.replace("\"p\"", "\"bogus\":1,\"p\""))
            .is_err()
    );
}

#[test]
fn f32_linear_run() {
    let params = SpacetimeParams::new(0.5f32, 3).unwrap();
    let cfg = SimConfig {
        nonlinear: false,
        ..SimConfig::new(params, 2.0f32, 0.3, 5.0).unwrap()
    };
    let r = run(&cfg).unwrap();
    assert!(r.diagnostics.iter().all(|d| d.u_integral.is_finite()));
    assert!(r.diagnostics.last().unwrap().u_integral > 0.0);
}

#[test]
fn synthetic_fit_is_exact() {
    let law = LifespanLaw {
        kind: LawKind::Power,
        exponent: 1.0,
    };
    let samples: Vec<(f64, Option<f64>)> = eps_grid(0.5, 0.05, 5)
        .into_iter()
        .map(|e| (e, Some(7.0 / e)))
        .collect();
    let rep = fit_lifespan(law, &samples).unwrap();
    assert!((rep.fitted_slope - 1.0).abs() <= 1e-12);
    assert!(rep.consistent && rep.monotone);
    assert!(rep.residuals.iter().all(|r| r.abs() < 1e-12));

    let law = LifespanLaw {
        kind: LawKind::Exponential,
        exponent: 2.0,
    };
    let samples: Vec<(f64, Option<f64>)> = eps_grid(0.5f64, 0.05, 6)
        .into_iter()
        .map(|e| (e, Some((0.01 * e.powi(-2)).exp())))
        .collect();
    assert!((fit_lifespan(law, &samples).unwrap().fitted_slope - 2.0).abs() < 1e-10);
}

#[test]
fn fit_preconditions() {
    let law = LifespanLaw {
        kind: LawKind::Power,
        exponent: 1.0,
    };
    let short: Vec<(f64, Option<f64>)> = eps_grid(0.5, 0.05, 3)
        .into_iter()
        .map(|e| (e, Some(1.0 / e)))
        .collect();
    assert!(matches!(
        fit_lifespan(law, &short),
        Err(Error::InsufficientData(_))
    ));
    let narrow: Vec<(f64, Option<f64>)> = eps_grid(0.4, 0.1, 5)
        .into_iter()
        .map(|e| (e, Some(1.0 / e)))
        .collect();
    assert!(matches!(
        fit_lifespan(law, &narrow),
        Err(Error::InsufficientData(_))
    ));
    let mut with_gap: Vec<(f64, Option<f64>)> = eps_grid(0.5, 0.05, 6)
        .into_iter()
        .map(|e| (e, Some(1.0 / e)))
        .collect();
    with_gap[2].1 = None;
    let rep = fit_lifespan(law, &with_gap).unwrap();
    assert_eq!(rep.excluded.len(), 1);
    assert_eq!(rep.points.len(), 5);
}

#[test]
fn eps_grid_spans_decade() {
    let g = eps_grid(0.5f64, 0.05, 5);
    assert_eq!(g.len(), 5);
    assert!((g[0] - 0.5).abs() < 1e-15 && (g[4] - 0.05).abs() < 1e-15);
    assert!(g
        .windows(2)
        .all(|w| (w[0] / w[1] - 10f64.powf(0.25)).abs() < 1e-12));
}

#[test]
fn sweep_is_ordered_and_deterministic() {
    let cfgs: Vec<SimConfig<f64>> = [0.2, 0.5, 0.3, 0.4]
        .iter()
        .map(|&e| SimConfig {
            refine: false,
            ..SimConfig::new(two_thirds(), 2.0, e, 20_000.0).unwrap()
        })
        .collect();
    let a: Vec<_> = sweep(&cfgs).into_iter().map(|r| r.unwrap()).collect();
    let b: Vec<_> = sweep(&cfgs).into_iter().map(|r| r.unwrap()).collect();
    let eps: Vec<f64> = a.iter().map(|r| r.config.eps).collect();
    assert_eq!(eps, [0.5, 0.4, 0.3, 0.2]);
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn second_critical_equivalence(n in 1u32..12, k in 0.0f64..0.95) {
        let nf = f64::from(n);
        let p = p1(nf, k);
        prop_assert!((((1.0 - k) * nf + 1.0) * (p - 1.0) - (p + 1.0)).abs() <= 1e-12 * (p + 1.0));
    }

    #[test]
    fn profiles_nonnegative_and_supported(r in 0.0f64..3.0, radius in 0.2f64..2.0) {
        for kind in [ProfileKind::Bump, ProfileKind::TruncatedGaussian] {
            let v = DataProfile { kind, radius }.value(r);
            prop_assert!(v >= 0.0);
            if r >= radius { prop_assert_eq!(v, 0.0); }
        }
    }
}
