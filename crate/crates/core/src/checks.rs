//! The verification suite: one function per acceptance criterion, shared by
//! the `acceptance` test target and the command-line `verify-all` report.
//!
//! Every check returns a [`CheckOutcome`] made of named sub-checks with the
//! measured value and the tolerance it was compared against. Numerical errors
//! inside a check become failed sub-checks rather than early returns, so a
//! corrupted kernel shows up as red rows instead of an aborted run.

use std::time::Instant;

use num::rational::BigRational;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exponents::{
    classify_lifespan, critical_exponent_p0, critical_exponent_p0_second_form, kato_quantities,
    p0_identity_lhs, p1, p2, p3, thresholds, LawKind, LifespanLaw,
};
use crate::iteration::{
    alpha_closed, alpha_recursion, beta_closed, beta_recursion, h_function, iteration_frame_check,
    j_function, lifespan_threshold_crit_p0, lifespan_threshold_crit_p1, slicing_sequences,
    weighted_power_sum, weighted_power_sum_closed, IterationCase,
};
use crate::kernels::{
    check_min_principle, fit_b0_b1, fit_b2, hypergeometric_wronskian, kernel_value,
    representation_disagreement, second_derivative_fd, AuxFnConfig, BoundGrid, FittedConstant,
    Kernel, KernelContext, KernelEval, KernelFault, Representation, SpacetimeParams,
};
use crate::pde_sim::{
    eps_grid, fit_curly_u_floor, fit_first_log_bound, fit_lifespan, run, sweep, FitReport,
    SimConfig, SimResult,
};
use crate::special::{kummer_m, SpecialEvalConfig};

/// Grid sizes: `Full` uses the grids the criteria are stated on, `Quick`
/// coarser ones for a fast smoke run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckOptions {
    pub profile: Profile,
    /// Corruption injected into every kernel evaluation.
    pub fault: KernelFault,
    /// Seed of the random sample grids.
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            profile: Profile::Full,
            fault: KernelFault::None,
            seed: 7,
        }
    }
}

impl CheckOptions {
    pub fn quick() -> Self {
        Self {
            profile: Profile::Quick,
            ..Self::default()
        }
    }

    fn full(&self) -> bool {
        self.profile == Profile::Full
    }

    fn ctx(&self) -> KernelContext<f64> {
        KernelContext::with_fault(self.fault)
    }
}

/// Sub-checks that fail on a correct build for reasons inherent to the
/// method, as `(criterion, sub-check name)`. They are still reported as
/// failures; callers decide whether they gate an exit status.
pub const KNOWN_LIMITATIONS: &[(u8, &str)] = &[(8, "support_cone_floor_1e-12")];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    /// Relation the measurement must satisfy, e.g. `<=`, `>`, `==`.
    pub relation: &'static str,
    pub tolerance: f64,
    pub note: String,
    pub known_limitation: bool,
}

/// A small numeric table attached to a check (for instance the representation grid).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub id: &'static str,
    pub title: &'static str,
    /// The identity or inequality the check reflects, written out.
    pub anchor: &'static str,
    pub passed: bool,
    pub subchecks: Vec<SubCheck>,
    pub elapsed_seconds: f64,
    pub table: Option<Table>,
}

impl CheckOutcome {
    /// Failed sub-checks not listed in [`KNOWN_LIMITATIONS`].
    pub fn unexpected_failures(&self) -> impl Iterator<Item = &SubCheck> {
        self.subchecks
            .iter()
            .filter(|s| !s.passed && !s.known_limitation)
    }
}

struct Builder {
    criterion: u8,
    subs: Vec<SubCheck>,
    start: Instant,
    table: Option<Table>,
}

impl Builder {
    fn new(criterion: u8) -> Self {
        Self {
            criterion,
            subs: Vec::new(),
            start: Instant::now(),
            table: None,
        }
    }

    fn push(
        &mut self,
        name: &str,
        passed: bool,
        measured: f64,
        relation: &'static str,
        tolerance: f64,
        note: String,
    ) {
        let known_limitation = KNOWN_LIMITATIONS
            .iter()
            .any(|&(c, n)| c == self.criterion && n == name);
        self.subs.push(SubCheck {
            name: name.to_string(),
            passed,
            measured,
            relation,
            tolerance,
            note,
            known_limitation,
        });
    }

    /// `measured <= tol`; NaN fails.
    fn le(&mut self, name: &str, measured: f64, tol: f64) {
        self.push(name, measured <= tol, measured, "<=", tol, String::new());
    }

    fn gt(&mut self, name: &str, measured: f64, bound: f64) {
        self.push(name, measured > bound, measured, ">", bound, String::new());
    }

    fn ge(&mut self, name: &str, measured: f64, bound: f64) {
        self.push(
            name,
            measured >= bound,
            measured,
            ">=",
            bound,
            String::new(),
        );
    }

    fn count(&mut self, name: &str, failures: usize) {
        self.push(
            name,
            failures == 0,
            failures as f64,
            "==",
            0.0,
            String::new(),
        );
    }

    fn flag(&mut self, name: &str, ok: bool, note: String) {
        self.push(name, ok, if ok { 1.0 } else { 0.0 }, "==", 1.0, note);
    }

    /// Records a failed sub-check carrying the error text.
    fn error(&mut self, name: &str, err: &crate::Error) {
        self.push(name, false, f64::NAN, "ok", 0.0, err.to_string());
    }

    fn note_last(&mut self, note: String) {
        if let Some(s) = self.subs.last_mut() {
            s.note = note;
        }
    }

    fn finish(self, id: &'static str, title: &'static str, anchor: &'static str) -> CheckOutcome {
        CheckOutcome {
            criterion: self.criterion,
            id,
            title,
            anchor,
            passed: self.subs.iter().all(|s| s.passed),
            subchecks: self.subs,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
            table: self.table,
        }
    }

    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

/// `(k, t, s, λ)` with `k ∈ [0, 0.95)`, `s ∈ [1, 10]`, `t ∈ [s, s + 10)`, `λ ∈ [0.1, 5]`.
pub fn random_kernel_points(seed: u64, count: usize) -> Vec<(f64, f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(0.0..0.95);
            let s = rng.gen_range(1.0..10.0);
            let t = s + rng.gen_range(0.0..10.0);
            let lambda = rng.gen_range(0.1..5.0);
            (k, t, s, lambda)
        })
        .collect()
}

/// Residuals of the kernel identities at one point, each relative to
/// `max(1, |value|)` except the absolute Cauchy-data error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PointResiduals {
    pub y0: f64,
    pub y1: f64,
    /// `|y₀(s,s) - 1|`, `|y₁(s,s)|`.
    pub initial: f64,
    /// `|∂_t y₁(s,s) - 1|` by central difference.
    pub initial_slope: f64,
    pub ode_y0: f64,
    pub ode_y1: f64,
    /// `∂_s y₁ + y₀`.
    pub ds_identity: f64,
    /// `∂_s² y₁ - λ² s^{-2k} y₁`.
    pub adjoint: f64,
}

impl PointResiduals {
    /// Largest residual held to the `1e-5` tolerance.
    pub fn worst_differential(&self) -> f64 {
        self.ode_y0
            .max(self.ode_y1)
            .max(self.ds_identity)
            .max(self.adjoint)
            .max(self.initial_slope)
    }

    pub fn passes(&self) -> bool {
        self.initial <= 1e-10 && self.worst_differential() <= 1e-5
    }
}

pub fn kernel_point_residuals(
    params: &SpacetimeParams<f64>,
    t: f64,
    s: f64,
    lambda: f64,
    ctx: &KernelContext<f64>,
) -> Result<PointResiduals> {
    let h = 1e-3;
    let val = |kern, t: f64, s: f64| {
        kernel_value(kern, Representation::Bessel, t, s, lambda, params, ctx)
    };
    let initial = (val(Kernel::Y0, s, s)? - 1.0)
        .abs()
        .max(val(Kernel::Y1, s, s)?.abs());
    let slope = (val(Kernel::Y1, s + 1e-6, s)? - val(Kernel::Y1, s - 1e-6, s)?) / 2e-6;
    let ode = |kern| -> Result<f64> {
        let e =
            KernelEval::in_representation(kern, Representation::Bessel, t, s, lambda, params, ctx)?;
        Ok(e.ode_residual / e.value.abs().max(1.0))
    };
    let y0 = val(Kernel::Y0, t, s)?;
    let ds = (val(Kernel::Y1, t, s + h)? - val(Kernel::Y1, t, s - h)?) / (2.0 * h);
    let y1 = val(Kernel::Y1, t, s)?;
    let d2 = second_derivative_fd(s, h, |x| val(Kernel::Y1, t, x))?;
    let adj = d2 - lambda * lambda * s.powf(-2.0 * params.k) * y1;
    Ok(PointResiduals {
        y0,
        y1,
        initial,
        initial_slope: (slope - 1.0).abs(),
        ode_y0: ode(Kernel::Y0)?,
        ode_y1: ode(Kernel::Y1)?,
        ds_identity: (ds + y0).abs() / y0.abs().max(1.0),
        adjoint: adj.abs() / y1.abs().max(1.0),
    })
}

/// Criterion 1: Cauchy data, ODE residuals, `∂_s y₁ = -y₀` and the adjoint
/// equation on 200 random points.
pub fn check_kernel_identities(opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(1);
    let ctx = opts.ctx();
    let mut w = PointResiduals::default();
    let mut failures = Vec::new();
    for (k, t, s, lambda) in random_kernel_points(opts.seed, 200) {
        let r =
            SpacetimeParams::new(k, 3).and_then(|p| kernel_point_residuals(&p, t, s, lambda, &ctx));
        match r {
            Ok(r) => {
                w.initial = w.initial.max(r.initial);
                w.initial_slope = w.initial_slope.max(r.initial_slope);
                w.ode_y0 = w.ode_y0.max(r.ode_y0.max(r.ode_y1));
                w.ds_identity = w.ds_identity.max(r.ds_identity);
                w.adjoint = w.adjoint.max(r.adjoint);
            }
            Err(e) => failures.push(format!("k={k} t={t} s={s} λ={lambda}: {e}")),
        }
    }
    b.count("evaluation_errors", failures.len());
    if let Some(first) = failures.first() {
        b.note_last(first.clone());
    }
    b.le("initial_conditions_abs", w.initial, 1e-10);
    b.le("initial_slope_y1", w.initial_slope, 1e-5);
    b.le("ode_residual_rel", w.ode_y0, 1e-5);
    b.le("ds_y1_plus_y0_rel", w.ds_identity, 1e-5);
    b.le("adjoint_residual_rel", w.adjoint, 1e-5);
    let elapsed = b.elapsed();
    b.le("runtime_seconds", elapsed, 30.0);
    b.finish(
        "kernel_identities",
        "Kernel identity suite",
        "y0(s,s)=1, y1(s,s)=0, ∂_t y1(s,s)=1; ∂_t² y = λ² t^{-2k} y; ∂_s y1 = -y0; ∂_s² y1 = λ² s^{-2k} y1",
    )
}

/// Criterion 2: Bessel, elementary and hypergeometric kernels at `k = 2/3`.
pub fn check_triple_representation(opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(2);
    let ctx = opts.ctx();
    let params = SpacetimeParams::new(2.0 / 3.0, 3).expect("valid");
    let (nt, nl) = if opts.full() { (60, 20) } else { (20, 8) };
    let mut worst = 0.0f64;
    let mut errors = 0;
    let mut rows = Vec::new();
    for i in 0..=nt {
        let t = 1.0 + 49.0 * f64::from(i) / f64::from(nt);
        for j in 0..=nl {
            let lambda = 0.05 * 100f64.powf(f64::from(j) / f64::from(nl));
            let mut row_worst = 0.0f64;
            for kern in [Kernel::Y0, Kernel::Y1] {
                match representation_disagreement(kern, t, 1.0, lambda, &params, &ctx) {
                    Ok(d) => row_worst = row_worst.max(d),
                    Err(_) => {
                        errors += 1;
                        row_worst = f64::INFINITY;
                    }
                }
            }
            worst = worst.max(row_worst);
            if opts.full() && i % 6 == 0 && j % 4 == 0 {
                let y0 = kernel_value(
                    Kernel::Y0,
                    Representation::Bessel,
                    t,
                    1.0,
                    lambda,
                    &params,
                    &ctx,
                )
                .unwrap_or(f64::NAN);
                let y1 = kernel_value(
                    Kernel::Y1,
                    Representation::Bessel,
                    t,
                    1.0,
                    lambda,
                    &params,
                    &ctx,
                )
                .unwrap_or(f64::NAN);
                rows.push(vec![t, lambda, y0, y1, row_worst]);
            }
        }
    }
    b.count("evaluation_errors", errors);
    b.le("max_relative_disagreement", worst, 1e-9);
    let elapsed = b.elapsed();
    b.le("runtime_seconds", elapsed, 10.0);
    if opts.full() {
        b.table = Some(Table {
            headers: ["t", "lambda", "y0", "y1", "max_rel_disagreement"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows,
        });
    }
    b.finish(
        "triple_representation",
        "Triple-representation agreement at k = 2/3",
        "y0 via I_ν, K_ν = (t/s)^{1/3} cosh Δ - sinh Δ/(3λ s^{1/3}) = combination of Ṽ₀, Ṽ₁ over W = 18λ³, Δ = 3λ(t^{1/3} - s^{1/3}); likewise y1",
    )
}

/// Criterion 3: `I_ν K_ν' - I_ν' K_ν = -1/z` and `W(Ṽ₀, Ṽ₁) = 18 λ³`.
pub fn check_wronskians(opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(3);
    let ctx = opts.ctx();
    let nz = if opts.full() { 400 } else { 100 };
    let mut worst = 0.0f64;
    let mut errors = 0;
    for &nu in &[0.5, 0.75, 1.0, 1.5, 2.5] {
        for i in 0..=nz {
            let z = 0.1 + 19.9 * f64::from(i) / f64::from(nz);
            match ctx.scaled_with_derivatives(nu, z) {
                Ok((ii, ip, kk, kp)) => {
                    worst = worst.max(((ii * kp - ip * kk) + 1.0 / z).abs() * z)
                }
                Err(_) => errors += 1,
            }
        }
    }
    b.count("bessel_evaluation_errors", errors);
    b.le("bessel_wronskian_rel", worst, 1e-10);
    let mut worst_h = 0.0f64;
    for i in 0..=nz {
        let t = 1.0 + 49.0 * f64::from(i) / f64::from(nz);
        for j in 0..=20 {
            let lambda = 0.05 * 100f64.powf(f64::from(j) / 20.0);
            let w = 18.0 * lambda.powi(3);
            worst_h = worst_h.max((hypergeometric_wronskian(t, lambda) - w).abs() / w);
        }
    }
    b.le("hypergeometric_wronskian_rel", worst_h, 1e-10);
    let spot: f64 = hypergeometric_wronskian(2.0, 1.5);
    b.le(
        "wronskian_spot_t2_l1.5",
        (spot - 60.75).abs() / 60.75,
        1e-12,
    );
    b.finish(
        "wronskians",
        "Bessel and hypergeometric Wronskians",
        "I_ν(z)K_ν'(z) - I_ν'(z)K_ν(z) = -1/z; Ṽ₀ ∂_tṼ₁ - Ṽ₁ ∂_tṼ₀ = 18λ³",
    )
}

/// Criterion 4: `z³ M(z; 2, 4) = 6(e^z (z - 2) + z + 2)`.
pub fn check_kummer(opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(4);
    let cfg = SpecialEvalConfig::<f64>::default();
    let nz = if opts.full() { 2000 } else { 200 };
    let mut worst = 0.0f64;
    let mut errors = 0;
    for i in 0..=nz {
        let z = -10.0 + 20.0 * f64::from(i) / f64::from(nz);
        match kummer_m(2.0, 4.0, z, &cfg) {
            Ok(m) => {
                let lhs = z.powi(3) * m;
                let rhs = 6.0 * (z.exp() * (z - 2.0) + z + 2.0);
                worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
            }
            Err(_) => errors += 1,
        }
    }
    b.count("evaluation_errors", errors);
    b.le("identity_rel", worst, 1e-11);
    match kummer_m(2.0, 4.0, 1.0, &cfg) {
        Ok(m) => {
            let expected = 18.0 - 6.0 * std::f64::consts::E;
            b.le("spot_value_z1", (m - expected).abs(), 1e-12);
            b.note_last(format!("M(1; 2, 4) = {m:.17}, 18 - 6e = {expected:.17}"));
            b.le("spot_value_6_digits", (m - 1.690_309).abs(), 5e-7);
        }
        Err(e) => b.error("spot_value_z1", &e),
    }
    b.finish(
        "kummer",
        "Kummer function identity",
        "z³ M(z; 2, 4) = 6(e^z (z - 2) + z + 2); M(1; 2, 4) = 18 - 6e",
    )
}

/// Criterion 5: exponent formulas, orderings and the Kato sign equivalences.
pub fn check_exponents(opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(5);
    let mut form_gap = 0.0f64;
    let mut identity_gap = 0.0f64;
    let mut order_failures = 0;
    let mut errors = 0;
    for ki in 0..10 {
        let k = f64::from(ki) / 10.0;
        let Ok(th) = thresholds(k) else {
            errors += 1;
            continue;
        };
        if !(th.n_tilde < th.n_k && th.n_k < th.n_hat) {
            order_failures += 1;
        }
        for ni in 1..=12 {
            let n = f64::from(ni);
            let (Ok(a), Ok(bb)) = (
                critical_exponent_p0(n, k),
                critical_exponent_p0_second_form(n, k),
            ) else {
                errors += 1;
                continue;
            };
            form_gap = form_gap.max((a - bb).abs());
            identity_gap = identity_gap.max((p0_identity_lhs(n, k, a) + 1.0 / (1.0 - k)).abs());
            let (q1, q2) = (p1(n, k), p2(n, k));
            let ok = if (n - th.n_k).abs() <= 1e-9 {
                (a - q1).abs() <= 1e-9 && (a - q2).abs() <= 1e-9
            } else if n < th.n_k {
                q2 < a && a < q1
            } else {
                q1 < a && a < q2
            };
            if !ok {
                order_failures += 1;
            }
        }
        // all four coincide at n = N(k)
        let n = th.n_k;
        match critical_exponent_p0(n, k) {
            Ok(a)
                if [p1(n, k), p2(n, k), p3(n, k)]
                    .iter()
                    .all(|q| (a - q).abs() <= 1e-9) => {}
            _ => order_failures += 1,
        }
    }
    b.count("evaluation_errors", errors);
    b.le("quadratic_forms_abs", form_gap, 1e-12);
    b.le("p0_identity_abs", identity_gap, 1e-10);
    b.count("ordering_violations", order_failures);
    let samples = if opts.full() { 10_000 } else { 2_000 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let (mut m1_bad, mut m2_bad, mut a_bad) = (0, 0, 0);
    for _ in 0..samples {
        let n: f64 = rng.gen_range(1.0..12.0);
        let k: f64 = rng.gen_range(0.0..0.95);
        let p: f64 = rng.gen_range(1.0001..6.0);
        let (Ok(q), Ok(p0)) = (kato_quantities(n, k, p), critical_exponent_p0(n, k)) else {
            m1_bad += 1;
            continue;
        };
        if (q.m1 > 0.0) != (p < p1(n, k)) {
            m1_bad += 1;
        }
        if (q.m2 > 0.0) != (p < p0) {
            m2_bad += 1;
        }
        if q.m1.max(q.m2) > 0.0 && q.a1.max(q.a2) <= 1.0 {
            a_bad += 1;
        }
    }
    b.count("m1_positive_iff_below_p1", m1_bad);
    b.count("m2_positive_iff_below_p0", m2_bad);
    b.count("m_positive_implies_a_above_one", a_bad);
    b.note_last(format!("{samples} random (n, k, p) triples"));
    b.finish(
        "exponents",
        "Exponent calculus",
        "p₀: ((1-k)n+1)p² - ((1-k)n+3+2k)p - 2(1-k) = 0; p₂ < p₀ < p₁ for n < N(k), reversed above; M₁ > 0 ⟺ p < p₁, M₂ > 0 ⟺ p < p₀",
    )
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Criterion 6: exact slicing sequences and threshold inversion.
pub fn check_iteration(_opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(6);
    let mut seq_bad = 0;
    let mut sum_bad = 0;
    for p in [rat(3, 2), rat(2, 1), rat(5, 2), rat(3, 1)] {
        let a = alpha_recursion(&p, 30);
        let bt = beta_recursion(&p, 30);
        for j in 0..=30 {
            if a[j] != alpha_closed(&p, j) || bt[j] != beta_closed(&p, j) {
                seq_bad += 1;
            }
        }
        for case in [IterationCase::CritP0, IterationCase::CritP1] {
            match slicing_sequences(case, &p, 30) {
                Ok(s) => {
                    if !s.closed_form_agrees {
                        seq_bad += 1;
                    }
                    // σ_{j+1} = p σ_j + 1
                    for j in 0..30 {
                        if s.alpha[j + 1] != s.alpha[j].clone() * p.clone() + rat(1, 1) {
                            seq_bad += 1;
                        }
                    }
                }
                Err(_) => seq_bad += 1,
            }
        }
        for j in 0..=25 {
            if weighted_power_sum(&p, j) != weighted_power_sum_closed(&p, j) {
                sum_bad += 1;
            }
        }
    }
    b.count("alpha_beta_sigma_exact_mismatches", seq_bad);
    b.count("summation_identity_mismatches", sum_bad);
    let (mut worst_j, mut worst_h) = (0.0f64, 0.0f64);
    let mut errors = 0;
    for p in [1.5f64, 2.0, 2.5, 3.0] {
        for log_c in [-3.0f64, 0.0, 1.0] {
            for eps in [0.9f64, 0.5, 0.3] {
                match (
                    lifespan_threshold_crit_p0(eps, p, log_c),
                    lifespan_threshold_crit_p1(eps, p, log_c),
                ) {
                    (Ok(t0), Ok(t1)) => {
                        worst_j = worst_j.max((j_function(t0.log_time, eps, p, log_c) - 1.0).abs());
                        worst_h = worst_h.max((h_function(t1.log_time, eps, p, log_c) - 1.0).abs());
                    }
                    _ => errors += 1,
                }
            }
        }
    }
    b.count("threshold_errors", errors);
    b.le("j_at_threshold_minus_one", worst_j, 1e-10);
    b.le("h_at_threshold_minus_one", worst_h, 1e-10);
    b.finish(
        "iteration",
        "Slicing iteration engine",
        "α_{j+1} = 1 + pα_j, β_{j+1} = p - 1 + pβ_j, σ_{j+1} = pσ_j + 1 against closed forms; Σ weighted power sum closed form; J(T_ε, ε) = H(T_ε, ε) = 1",
    )
}

/// Criterion 7: kernel lower bounds by the minimum principle and the fitted
/// auxiliary-function constants.
pub fn check_bounds(opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(7);
    let ctx = opts.ctx();
    let (mut w0, mut w1) = (f64::INFINITY, f64::INFINITY);
    let mut errors = Vec::new();
    let pts = random_kernel_points(
        opts.seed.wrapping_add(4),
        if opts.full() { 400 } else { 100 },
    );
    for (i, k) in [0.0, 0.3, 2.0 / 3.0, 0.9].into_iter().enumerate() {
        let params = SpacetimeParams::new(k, 3).expect("valid");
        let chunk: Vec<(f64, f64, f64)> = pts
            .iter()
            .skip(i)
            .step_by(4)
            .map(|&(_, t, s, l)| (t, s, l))
            .collect();
        match check_min_principle(&params, &ctx, &chunk) {
            Ok(r) => {
                w0 = w0.min(r.worst_y0);
                w1 = w1.min(r.worst_y1);
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    b.count("evaluation_errors", errors.len());
    if let Some(e) = errors.first() {
        b.note_last(e.clone());
    }
    b.ge("y0_minus_cosh_margin", w0, -1e-9);
    b.ge("y1_minus_sinh_margin", w1, -1e-9);

    let params = SpacetimeParams::new(2.0 / 3.0, 3).expect("valid");
    let grid = if opts.full() {
        BoundGrid::new(100.0, 6, 4)
    } else {
        BoundGrid::new(30.0, 4, 3)
    };
    let stability = |name: &str, b: &mut Builder, coarse: Result<f64>, fine: Result<f64>| match (
        coarse, fine,
    ) {
        (Ok(c), Ok(f)) => {
            b.gt(&format!("{name}_positive"), c.min(f), 0.0);
            b.le(&format!("{name}_doubling_change"), (f / c - 1.0).abs(), 0.1);
            b.note_last(format!("{c:.6e} -> {f:.6e}"));
        }
        (Err(e), _) | (_, Err(e)) => b.error(name, &e),
    };
    let cfg = AuxFnConfig::new(0.5, 1.0, 1.0).expect("valid");
    let (c, f) = (
        fit_b0_b1(&params, &cfg, &grid),
        fit_b0_b1(&params, &cfg, &grid.doubled()),
    );
    let b0 = |r: &Result<(FittedConstant<f64>, FittedConstant<f64>)>| {
        r.as_ref().map(|x| x.0.value).map_err(Clone::clone)
    };
    let b1 = |r: &Result<(FittedConstant<f64>, FittedConstant<f64>)>| {
        r.as_ref().map(|x| x.1.value).map_err(Clone::clone)
    };
    stability("b0", &mut b, b0(&c), b0(&f));
    stability("b1", &mut b, b1(&c), b1(&f));
    let cfg2 = AuxFnConfig::new(1.5, 1.0, 1.0).expect("valid");
    stability(
        "b2",
        &mut b,
        fit_b2(&params, &cfg2, &grid).map(|c| c.value),
        fit_b2(&params, &cfg2, &grid.doubled()).map(|c| c.value),
    );
    b.finish(
        "bounds",
        "Minimum principle and auxiliary-function bounds",
        "y0 ≥ cosh(λΔφ), y1 ≥ (st)^{k/2} sinh(λΔφ)/λ; ξ_q ≥ B₀⟨A_k(s)⟩^{-q-1}, η_q ≥ B₁(st)^{k/2}⟨A_k(t)⟩^{-1}⟨A_k(s)⟩^{-q}, ξ_q(t,t,x) ≤ B₂⟨A_k(t)⟩^{-(n-1)/2}⟨A_k(t)-|x|⟩^{(n-3)/2-q}",
    )
}

fn sim_cases() -> [(SpacetimeParams<f64>, f64); 2] {
    [
        (SpacetimeParams::new(2.0 / 3.0, 3).expect("valid"), 2.0),
        (SpacetimeParams::new(0.0, 1).expect("valid"), 2.0),
    ]
}

/// `t_max` generous enough for the smallest ε of the sweeps to blow up.
const SWEEP_T_MAX: f64 = 20_000.0;

/// Criterion 8: support cone, zero data, monotone lifespans and refinement agreement.
pub fn check_simulator(opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(8);
    let dr = if opts.full() { 0.005 } else { 0.01 };
    let mut worst_abs = f64::NEG_INFINITY;
    let mut worst_rel = f64::NEG_INFINITY;
    for (params, p) in sim_cases() {
        let base = SimConfig::new(params, p, 0.3, 20.0).map(|c| SimConfig {
            nonlinear: false,
            ..c.with_dr(dr)
        });
        let runs = base.and_then(|cfg| {
            let abs = run(&cfg)?;
            let rel_cfg = SimConfig {
                support_floor: 1e-4 * cfg.eps,
                ..cfg.clone()
            };
            let relr = run(&rel_cfg)?;
            Ok((abs.max_cone_excess, relr.max_cone_excess))
        });
        match runs {
            Ok((a, r)) => {
                worst_abs = worst_abs.max(a);
                worst_rel = worst_rel.max(r);
            }
            Err(e) => b.error("support_runs", &e),
        }
    }
    b.le("support_cone_floor_1e-12", worst_abs, 2.0 * dr);
    b.note_last(format!(
        "max radius with |u| > 1e-12 beyond R + A_k(t); dr = {dr}; the O(dr⁴) numerical front tail of an explicit second-order scheme exceeds 1e-12"
    ));
    b.le("support_cone_floor_1e-4_eps", worst_rel, 2.0 * dr);

    match SimConfig::new(
        SpacetimeParams::new(2.0 / 3.0, 3).expect("valid"),
        2.0,
        0.0,
        30.0,
    )
    .and_then(|c| c.with_frame_aux())
    .and_then(|c| run(&c))
    {
        Ok(r) => {
            let zero = r.diagnostics.iter().all(|d| {
                d.max_u == 0.0 && d.u_integral == 0.0 && d.curly_u.map_or(true, |c| c == 0.0)
            });
            b.flag(
                "zero_data_stays_zero",
                zero && !r.blew_up,
                format!("{} diagnostic rows", r.diagnostics.len()),
            );
        }
        Err(e) => b.error("zero_data_stays_zero", &e),
    }

    let eps = [0.4, 0.2, 0.1];
    let mut worst_agreement = 0.0f64;
    let mut monotone_bad = 0;
    for (params, p) in sim_cases() {
        let cfgs: Vec<SimConfig<f64>> = eps
            .iter()
            .filter_map(|&e| {
                SimConfig::new(params, p, e, SWEEP_T_MAX)
                    .ok()
                    .map(|c| c.with_dr(dr))
            })
            .collect();
        let results: Vec<Result<SimResult<f64>>> = sweep(&cfgs);
        let mut times = Vec::new();
        for r in results {
            match r {
                Ok(s) if s.blew_up => {
                    times.push(s.t_num.unwrap_or(f64::NAN));
                    worst_agreement =
                        worst_agreement.max(s.refinement_agreement.unwrap_or(f64::INFINITY));
                }
                Ok(_) => times.push(f64::NAN),
                Err(e) => {
                    b.error("sweep_run", &e);
                    times.push(f64::NAN);
                }
            }
        }
        // sorted by descending ε, so T must increase
        if !times.windows(2).all(|w| w[1] > w[0]) {
            monotone_bad += 1;
        }
    }
    b.count("t_num_not_strictly_decreasing_in_eps", monotone_bad);
    b.le("refinement_agreement", worst_agreement, 0.05);
    b.finish(
        "simulator",
        "Simulator physics",
        "supp u(t) ⊂ {|x| ≤ R + A_k(t)}; u ≡ 0 for zero data; T(ε) decreasing; |T(dr) - T(dr/2)| ≤ 5% T",
    )
}

/// One lifespan sweep with its fit, as reported by criterion 9.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n: u32,
    pub k: f64,
    pub p: f64,
    pub dr: f64,
    pub report: FitReport<f64>,
}

/// Runs the 5-point ε decade for one `(n, k, p)` and fits the lifespan slope.
pub fn lifespan_sweep(params: SpacetimeParams<f64>, p: f64, dr: f64) -> Result<SweepSummary> {
    let class = classify_lifespan(params.n_real(), params.k, p)?;
    let law = class.law.unwrap_or(LifespanLaw {
        kind: LawKind::Power,
        exponent: f64::NAN,
    });
    let cfgs = eps_grid(0.5, 0.05, 5)
        .into_iter()
        .map(|e| SimConfig::new(params, p, e, SWEEP_T_MAX).map(|c| c.with_dr(dr)))
        .collect::<Result<Vec<_>>>()?;
    let mut samples = Vec::new();
    for r in sweep(&cfgs) {
        let s = r?;
        samples.push((s.config.eps, if s.blew_up { s.t_num } else { None }));
    }
    let report = fit_lifespan(law, &samples)?;
    Ok(SweepSummary {
        n: params.n,
        k: params.k,
        p,
        dr,
        report,
    })
}

/// Criterion 9: fitted lifespan slopes against the subcritical prediction.
pub fn check_lifespan_scaling(opts: &CheckOptions) -> CheckOutcome {
    let (outcome, _) = check_lifespan_scaling_with_sweeps(opts);
    outcome
}

/// Criterion 9, also returning the sweep fits for reporting.
pub fn check_lifespan_scaling_with_sweeps(
    opts: &CheckOptions,
) -> (CheckOutcome, Vec<SweepSummary>) {
    let mut b = Builder::new(9);
    let dr = if opts.full() {
        1.0 / 200.0
    } else {
        1.0 / 100.0
    };
    let mut summaries = Vec::new();
    let mut rows = Vec::new();
    for (params, p) in sim_cases() {
        let tag = format!("n{}_k{:.4}_p{}", params.n, params.k, p);
        match lifespan_sweep(params, p, dr) {
            Ok(s) => {
                b.le(
                    &format!("{tag}_slope_rel_error"),
                    s.report.relative_error,
                    0.3,
                );
                b.note_last(format!(
                    "fitted {:.6}, predicted {:.6}, {} of 5 runs blew up",
                    s.report.fitted_slope,
                    s.report.predicted_exponent,
                    s.report.points.len()
                ));
                b.flag(&format!("{tag}_monotone"), s.report.monotone, String::new());
                for &(e, t) in &s.report.points {
                    rows.push(vec![f64::from(params.n), params.k, p, e, t]);
                }
                summaries.push(s);
            }
            Err(e) => b.error(&format!("{tag}_sweep"), &e),
        }
    }
    let elapsed = b.elapsed();
    b.le("runtime_seconds", elapsed, 900.0);
    b.table = Some(Table {
        headers: ["n", "k", "p", "eps", "T_num"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
    });
    (
        b.finish(
            "lifespan_scaling",
            "Subcritical lifespan scaling",
            "T(ε) ≲ ε^{-(2/(p-1) - (1-k)n)^{-1}}, log T_num against log(1/ε)",
        ),
        summaries,
    )
}

/// Criterion 10: functional lower bounds and the iteration frame on three configurations.
pub fn check_functionals(opts: &CheckOptions) -> CheckOutcome {
    let mut b = Builder::new(10);
    let two_thirds = SpacetimeParams::new(2.0 / 3.0, 3).expect("valid");
    let p0 = critical_exponent_p0(3.0, 2.0 / 3.0).unwrap_or(f64::NAN);
    let cases = [
        (two_thirds, p0),
        (two_thirds, 2.0),
        (SpacetimeParams::new(0.0, 1).expect("valid"), 2.0),
    ];
    let dr = if opts.full() { 0.01 } else { 0.02 };
    for (params, p) in cases {
        let tag = format!("n{}_k{:.4}_p{:.4}", params.n, params.k, p);
        let sim = SimConfig::new(params, p, 0.3, 40.0)
            .and_then(|c| c.with_dr(dr).with_frame_aux())
            .and_then(|c| run(&c));
        let sim = match sim {
            Ok(s) => s,
            Err(e) => {
                b.error(&tag, &e);
                continue;
            }
        };
        let floor = fit_curly_u_floor(&sim).map_or(f64::NAN, |c| c.value);
        b.gt(&format!("{tag}_curly_u_over_eps_floor"), floor, 0.0);
        let m = fit_first_log_bound(&sim).map_or(f64::NAN, |c| c.value);
        b.gt(&format!("{tag}_m_fit_log_bound"), m, 0.0);
        match iteration_frame_check(&sim, IterationCase::CritP0) {
            Ok(f) => {
                b.gt(&format!("{tag}_c_frame"), f.c_frame, 0.0);
                b.note_last(format!("{} samples", f.samples));
            }
            Err(e) => b.error(&format!("{tag}_c_frame"), &e),
        }
    }
    b.finish(
        "functionals",
        "Functional bounds on simulated runs",
        "𝒰(t) ≥ Cε; 𝒰(t) ≥ M ε^p log(2t/3) for t ≥ 3/2; 𝒰(t) ≥ C⟨A_k(t)⟩^{-1} ∫₁^t (φ_k(t) - φ_k(s)) s^{-1} (log⟨A_k(s)⟩)^{1-p} 𝒰(s)^p ds",
    )
}

/// Every criterion in order.
pub fn run_all(opts: &CheckOptions) -> Vec<CheckOutcome> {
    vec![
        check_kernel_identities(opts),
        check_triple_representation(opts),
        check_wronskians(opts),
        check_kummer(opts),
        check_exponents(opts),
        check_iteration(opts),
        check_bounds(opts),
        check_simulator(opts),
        check_lifespan_scaling(opts),
        check_functionals(opts),
    ]
}
