use serde::{Deserialize, Serialize};

use super::config::{SimConfig, ACTIVE_MARGIN};
use crate::error::{Error, Result};
use crate::kernels::{
    kernel_value, Kernel, KernelContext, Representation, SpacetimeParams, XiDiagonalTable,
};
use crate::quadrature::trapezoid;
use crate::scalar::Real;
use crate::special::{sphere_area, yz_phi};

/// Amplitudes at which crossing times are always recorded.
pub const REPORTED_THRESHOLDS: [f64; 3] = [1e4, 1e6, 1e8];
/// Relative agreement required between the `dr` and `dr/2` blow-up times.
pub const REFINEMENT_TOLERANCE: f64 = 0.05;
/// The step never exceeds this fraction of the local ODE time scale
/// `(t^{1-p} max|u|^{p-1})^{-1/2}`.
pub const NONLINEAR_STEP_FACTOR: f64 = 0.05;
/// Steps of the linear dry run that screens for instability.
pub const DRY_RUN_STEPS: usize = 256;
/// Energy growth beyond this factor in linear mode is reported as instability.
pub const ENERGY_GROWTH_LIMIT: f64 = 2.0;
/// The weak-form snapshot is taken while `max|u|` stays below this multiple of its initial value.
pub const WEAK_CHECK_GROWTH: f64 = 100.0;

/// One row of the per-run diagnostics (also the CSV schema).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic<F> {
    pub t: F,
    pub max_u: F,
    /// `U(t) = ∫ u dx`.
    pub u_integral: F,
    /// `U'(t) = ∫ u_t dx`.
    pub u_prime: F,
    /// `∫ |u|^p dx`.
    pub power_integral: F,
    /// `𝒰(t)`, when enabled.
    pub curly_u: Option<F>,
    pub support_radius: F,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCrossing<F> {
    pub amplitude: F,
    pub time: Option<F>,
}

/// Both sides of the kernel integral identity at the snapshot time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelWeakData<F> {
    pub lambda: F,
    /// `∫ u(t) φ_λ dx`.
    pub lhs: F,
    /// `ε y₀(t,1) ∫ u₀ φ_λ + ε y₁(t,1) ∫ u₁ φ_λ`.
    pub data_term: F,
    /// `∫₁^t s^{1-p} y₁(t,s) ∫ |u|^p φ_λ dx ds`.
    pub duhamel: F,
}

/// Ingredients of the weak-form identities at a time before blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakSnapshot<F> {
    pub t: F,
    pub u_prime_initial: F,
    pub u_prime: F,
    /// `∫₁^t s^{1-p} ∫ |u|^p dx ds`.
    pub source_integral: F,
    pub kernel: Option<KernelWeakData<F>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "F: Real + Deserialize<'de>"))]
pub struct SimResult<F> {
    pub config: SimConfig<F>,
    /// Threshold crossed and confirmed by the `dr/2` rerun (or crossed with refinement disabled).
    pub blew_up: bool,
    /// Earliest crossing of `blowup_amplitude`.
    pub t_num: Option<F>,
    /// `|T(dr) - T(dr/2)|`.
    pub uncertainty: Option<F>,
    /// `|T(dr) - T(dr/2)| / T(dr/2)`.
    pub refinement_agreement: Option<F>,
    pub threshold_times: Vec<ThresholdCrossing<F>>,
    pub diagnostics: Vec<Diagnostic<F>>,
    pub weak: WeakSnapshot<F>,
    /// Relative residual of the `ψ = 1` identity at the snapshot.
    pub weak_residual: F,
    /// Largest `support_radius(t) - (R + A_k(t))` over all steps.
    pub max_cone_excess: F,
    /// `max E(t) / E(1)` of the discrete linear energy, linear runs only.
    pub energy_growth: Option<F>,
    pub t_end: F,
    pub steps: usize,
}

impl<F: Real> SimResult<F> {
    pub fn u_series(&self) -> Vec<(F, F)> {
        self.diagnostics
            .iter()
            .map(|d| (d.t, d.u_integral))
            .collect()
    }

    pub fn curly_u_series(&self) -> Vec<(F, F)> {
        self.diagnostics
            .iter()
            .filter_map(|d| d.curly_u.map(|c| (d.t, c)))
            .collect()
    }

    pub fn support_radius_series(&self) -> Vec<(F, F)> {
        self.diagnostics
            .iter()
            .map(|d| (d.t, d.support_radius))
            .collect()
    }

    /// Diagnostics taken before `max|u|` first exceeded `blowup_amplitude`.
    pub fn pre_blowup(&self) -> impl Iterator<Item = &Diagnostic<F>> {
        let cap = self.config.blowup_amplitude;
        self.diagnostics.iter().take_while(move |d| d.max_u <= cap)
    }
}

/// Trapezoid weights of `∫_{R^n} f(|x|) dx` on the grid `r_i = i dr`.
pub fn radial_weights<F: Real>(n: u32, dr: F, len: usize) -> Vec<F> {
    let area = sphere_area::<F>(n - 1);
    (0..len)
        .map(|i| {
            let r = dr * F::from_usize_lossy(i);
            let end = if i == 0 || i + 1 == len {
                F::lit(0.5)
            } else {
                F::one()
            };
            area * dr * end * r.powi(n as i32 - 1)
        })
        .collect()
}

/// `U = ∫ u dx` for radial samples `u_i = u(i dr)`.
pub fn functional_u<F: Real>(n: u32, dr: F, u: &[F]) -> F {
    radial_weights(n, dr, u.len())
        .iter()
        .zip(u)
        .fold(F::zero(), |a, (&w, &x)| a + w * x)
}

/// `𝒰(t) = t^{-k/2} ∫ u ξ_q(t, t, x) dx` for radial samples on the table's grid.
pub fn functional_curly_u<F: Real>(
    params: &SpacetimeParams<F>,
    t: F,
    dr: F,
    u: &[F],
    table: &XiDiagonalTable<F>,
) -> F {
    let mut xi = vec![F::zero(); u.len()];
    table.eval_into(t, &mut xi);
    let w = radial_weights(params.n, dr, u.len());
    t.powf(-params.k * F::lit(0.5)) * (0..u.len()).fold(F::zero(), |a, i| a + w[i] * u[i] * xi[i])
}

fn power_abs<F: Real>(p: F) -> impl Fn(F) -> F {
    let two = p == F::lit(2.0);
    let three = p == F::lit(3.0);
    move |x: F| {
        if two {
            x * x
        } else if three {
            let a = x.abs();
            a * a * a
        } else {
            x.abs().powf(p)
        }
    }
}

struct Grid<F> {
    dr: F,
    /// Index of the Dirichlet node.
    last: usize,
    radii: Vec<F>,
    weights: Vec<F>,
    lap_minus: Vec<F>,
    lap_plus: Vec<F>,
}

impl<F: Real> Grid<F> {
    fn new(n: u32, dr: F, len: usize) -> Self {
        let radii: Vec<F> = (0..len).map(|i| dr * F::from_usize_lossy(i)).collect();
        let inv2 = (dr * dr).recip();
        let nm1 = F::lit(f64::from(n) - 1.0);
        let mut lap_minus = vec![F::zero(); len];
        let mut lap_plus = vec![F::zero(); len];
        for i in 1..len {
            let drift = nm1 / (F::lit(2.0) * radii[i] * dr);
            lap_minus[i] = inv2 - drift;
            lap_plus[i] = inv2 + drift;
        }
        // r = 0: even reflection, Δu → n u_rr = 2n (u₁ - u₀)/dr².
        lap_plus[0] = F::lit(2.0 * f64::from(n)) * inv2;
        Self {
            dr,
            last: len - 1,
            radii,
            weights: radial_weights(n, dr, len),
            lap_minus,
            lap_plus,
        }
    }

    #[inline]
    fn laplacian(&self, u: &[F], i: usize) -> F {
        if i == 0 {
            self.lap_plus[0] * (u[1] - u[0])
        } else {
            let inv2 = (self.dr * self.dr).recip();
            self.lap_minus[i] * u[i - 1] - F::lit(2.0) * inv2 * u[i] + self.lap_plus[i] * u[i + 1]
        }
    }

    fn integral(&self, f: &[F], active: usize) -> F {
        (0..active).fold(F::zero(), |a, i| a + self.weights[i] * f[i])
    }
}

/// Raw outcome of one resolution.
pub(crate) struct Integration<F> {
    pub diagnostics: Vec<Diagnostic<F>>,
    pub crossings: Vec<ThresholdCrossing<F>>,
    pub weak: WeakSnapshot<F>,
    pub max_cone_excess: F,
    pub energy_growth: Option<F>,
    pub t_end: F,
    pub steps: usize,
}

pub(crate) struct IntegrateOptions {
    pub max_steps: Option<usize>,
    pub with_aux: bool,
    pub with_kernel: bool,
}

fn thresholds<F: Real>(cfg: &SimConfig<F>) -> Vec<F> {
    let mut v: Vec<F> = REPORTED_THRESHOLDS.iter().map(|&a| F::lit(a)).collect();
    v.push(cfg.blowup_amplitude);
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite thresholds"));
    v.dedup();
    v
}

pub(crate) fn integrate<F: Real>(
    cfg: &SimConfig<F>,
    dr: F,
    opts: &IntegrateOptions,
) -> Result<Integration<F>> {
    let params = cfg.params;
    let p = cfg.p;
    let len = (cfg.r_max / dr)
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX)
        .saturating_add(1);
    if len < 4 {
        return Err(Error::InvalidConfig(
            "radial grid needs at least 4 nodes".into(),
        ));
    }
    let grid = Grid::new(params.n, dr, len);
    let radius = cfg.data_profile.radius;
    let cone = |t: F| radius + params.light_cone_a(t);
    let active_for = |t: F| -> usize {
        let i = (cone(t) / dr).ceil().to_usize().unwrap_or(usize::MAX);
        i.saturating_add(ACTIVE_MARGIN).min(grid.last)
    };
    let pw = power_abs(p);

    let mut u: Vec<F> = grid
        .radii
        .iter()
        .map(|&r| cfg.eps * cfg.data_profile.value(r))
        .collect();
    let mut v: Vec<F> = u.iter().map(|&x| cfg.u1_factor * x).collect();
    u[grid.last] = F::zero();
    v[grid.last] = F::zero();
    let mut a = vec![F::zero(); len];
    let mut powers = vec![F::zero(); len];

    let phi_lambda: Option<(F, Vec<F>)> = match (opts.with_kernel, cfg.kernel_test_lambda) {
        (true, Some(l)) => {
            let upto = active_for(cfg.t_max) + 1;
            let vals = grid.radii[..upto]
                .iter()
                .map(|&r| yz_phi(params.n, l * r))
                .collect::<Result<Vec<F>>>()?;
            Some((l, vals))
        }
        _ => None,
    };

    let mut table = match (opts.with_aux, &cfg.aux) {
        (true, Some(aux)) => Some(XiDiagonalTable::new(
            &params,
            aux,
            &grid.radii[..active_for(F::one()) + 1],
        )?),
        _ => None,
    };
    let mut xi = vec![F::zero(); len];

    // Returns (∫|u|^p, ∫|u|^p φ_λ) and fills `a`.
    let force = |t: F, u: &[F], active: usize, a: &mut [F], powers: &mut [F]| -> (F, F) {
        let c = t.powf(-F::lit(2.0) * params.k);
        let src = t.powf(F::one() - p);
        for i in 0..active {
            powers[i] = pw(u[i]);
            let lap = grid.laplacian(u, i);
            a[i] = if cfg.nonlinear {
                c * lap + src * powers[i]
            } else {
                c * lap
            };
        }
        let s = grid.integral(powers, active);
        let g = match &phi_lambda {
            Some((_, ph)) => (0..active).fold(F::zero(), |acc, i| {
                acc + grid.weights[i] * powers[i] * ph[i]
            }),
            None => F::zero(),
        };
        (s, g)
    };

    let max_abs =
        |u: &[F], active: usize| u[..active].iter().fold(F::zero(), |m, x| m.max(x.abs()));
    let floor = cfg.support_floor;
    let support = |u: &[F], active: usize| -> Option<usize> {
        (0..active).rev().find(|&i| u[i].abs() > floor)
    };

    let mut t = F::one();
    let mut active = active_for(t);
    let (mut s_pow, mut g_pow) = force(t, &u, active, &mut a, &mut powers);
    let source_weight = |t: F| {
        if cfg.nonlinear {
            t.powf(F::one() - p)
        } else {
            F::zero()
        }
    };

    let energy = |t: F, u: &[F], v: &[F], active: usize| -> F {
        let kinetic = grid.integral(&v.iter().map(|x| *x * *x).collect::<Vec<F>>(), active);
        let area = sphere_area::<F>(params.n - 1);
        let mut grad = F::zero();
        for i in 0..active.min(grid.last) {
            let rm = (grid.radii[i] + grid.radii[i + 1]) * F::lit(0.5);
            let d = (u[i + 1] - u[i]) / dr;
            grad += area * dr * rm.powi(params.n as i32 - 1) * d * d;
        }
        F::lit(0.5) * (kinetic + t.powf(-F::lit(2.0) * params.k) * grad)
    };
    let e0 = energy(t, &u, &v, active);
    let mut e_max = e0;

    let levels = thresholds(cfg);
    let top = *levels.last().expect("nonempty thresholds");
    let mut crossings: Vec<ThresholdCrossing<F>> = levels
        .iter()
        .map(|&amplitude| ThresholdCrossing {
            amplitude,
            time: None,
        })
        .collect();

    let u_prime_initial = grid.integral(&v, active);
    let mut source_integral = F::zero();
    let mut history: Vec<(F, F)> = vec![(t, source_weight(t) * g_pow)];
    let mut max_u = max_abs(&u, active);
    let weak_limit = max_u * F::lit(WEAK_CHECK_GROWTH);
    let mut weak = WeakSnapshot {
        t,
        u_prime_initial,
        u_prime: u_prime_initial,
        source_integral,
        kernel: None,
    };
    let mut weak_history_len = 1;
    let mut weak_lhs = F::zero();
    let kernel_lhs = |u: &[F], active: usize| match &phi_lambda {
        Some((_, ph)) => (0..active).fold(F::zero(), |acc, i| acc + grid.weights[i] * u[i] * ph[i]),
        None => F::zero(),
    };
    let kernel_data = phi_lambda.as_ref().map(|(_, ph)| {
        let d0 = (0..active).fold(F::zero(), |acc, i| {
            acc + grid.weights[i] * cfg.data_profile.value(grid.radii[i]) * ph[i]
        });
        (d0, d0 * cfg.u1_factor)
    });
    if phi_lambda.is_some() {
        weak_lhs = kernel_lhs(&u, active);
    }

    let mut max_cone_excess = F::neg_infinity();
    let mut diagnostics = Vec::new();
    let sample = |t: F,
                  u: &[F],
                  v: &[F],
                  active: usize,
                  max_u: F,
                  s_pow: F,
                  table: &mut Option<XiDiagonalTable<F>>,
                  xi: &mut [F]|
     -> Result<Diagnostic<F>> {
        let curly_u = match table {
            Some(tab) => {
                let have = tab.radii().len();
                if active + 1 > have {
                    let want = (active + 1).max(have + have / 2).min(len);
                    tab.extend(&grid.radii[have..want])?;
                }
                tab.eval_into(t, &mut xi[..active]);
                let acc =
                    (0..active).fold(F::zero(), |acc, i| acc + grid.weights[i] * u[i] * xi[i]);
                Some(t.powf(-params.k * F::lit(0.5)) * acc)
            }
            None => None,
        };
        Ok(Diagnostic {
            t,
            max_u,
            u_integral: grid.integral(u, active),
            u_prime: grid.integral(v, active),
            power_integral: s_pow,
            curly_u,
            support_radius: support(u, active).map_or(F::zero(), |i| grid.radii[i]),
        })
    };
    diagnostics.push(sample(
        t, &u, &v, active, max_u, s_pow, &mut table, &mut xi,
    )?);

    let step_floor = F::lit(1e-13);
    let mut steps = 0usize;
    loop {
        if t >= cfg.t_max || opts.max_steps.is_some_and(|m| steps >= m) {
            break;
        }
        let mut dt = cfg.cfl * t.powf(params.k) * dr;
        if cfg.nonlinear && max_u > F::zero() {
            let rate = (t.powf(F::one() - p) * max_u.powf(p - F::one())).sqrt();
            dt = dt.min(F::lit(NONLINEAR_STEP_FACTOR) / rate);
        }
        dt = dt.min(cfg.t_max - t);
        if dt <= step_floor * t {
            break;
        }
        let half = dt * F::lit(0.5);
        for i in 0..active {
            v[i] += half * a[i];
        }
        let next_active = active_for(t + dt);
        for i in 0..next_active {
            u[i] += dt * v[i];
        }
        let prev_weighted = source_weight(t) * s_pow;
        t = if cfg.t_max - (t + dt) <= step_floor * t {
            cfg.t_max
        } else {
            t + dt
        };
        active = next_active;
        let (s_new, g_new) = force(t, &u, active, &mut a, &mut powers);
        s_pow = s_new;
        g_pow = g_new;
        for i in 0..active {
            v[i] += half * a[i];
        }
        steps += 1;
        source_integral += half * (prev_weighted + source_weight(t) * s_pow);
        if phi_lambda.is_some() {
            history.push((t, source_weight(t) * g_pow));
        }

        let prev_max = max_u;
        max_u = max_abs(&u, active);
        if !max_u.is_finite() {
            if crossings.iter().any(|c| c.time.is_some()) {
                break;
            }
            return Err(Error::Instability {
                growth: f64::INFINITY,
            });
        }
        if let Some(i) = support(&u, active) {
            if i + 2 >= grid.last {
                return Err(Error::ConeViolation {
                    t: t.to_f64_lossy(),
                    radius: grid.radii[i].to_f64_lossy(),
                    r_max: cfg.r_max.to_f64_lossy(),
                });
            }
            max_cone_excess = max_cone_excess.max(grid.radii[i] - cone(t));
        }
        for c in crossings.iter_mut().filter(|c| c.time.is_none()) {
            if max_u > c.amplitude {
                let (l0, l1, la) = (prev_max.ln(), max_u.ln(), c.amplitude.ln());
                let frac = if l1 > l0 {
                    ((la - l0) / (l1 - l0)).max(F::zero()).min(F::one())
                } else {
                    F::one()
                };
                c.time = Some(t - dt + frac * dt);
            }
        }

        let done = max_u > top || t >= cfg.t_max || opts.max_steps.is_some_and(|m| steps >= m);
        if steps % cfg.diagnostic_every == 0 || done {
            let d = sample(t, &u, &v, active, max_u, s_pow, &mut table, &mut xi)?;
            if !cfg.nonlinear {
                e_max = e_max.max(energy(t, &u, &v, active));
            }
            if max_u <= weak_limit {
                weak = WeakSnapshot {
                    t,
                    u_prime_initial,
                    u_prime: d.u_prime,
                    source_integral,
                    kernel: None,
                };
                weak_history_len = history.len();
                if phi_lambda.is_some() {
                    weak_lhs = kernel_lhs(&u, active);
                }
            }
            diagnostics.push(d);
        }
        if done {
            break;
        }
    }

    let energy_growth = if cfg.nonlinear {
        None
    } else if e0 > F::zero() {
        Some(e_max / e0)
    } else {
        Some(F::one())
    };
    if let Some(g) = energy_growth {
        if g > F::lit(ENERGY_GROWTH_LIMIT) {
            return Err(Error::Instability {
                growth: g.to_f64_lossy(),
            });
        }
    }

    if let (Some((lambda, _)), Some((d0, d1))) = (&phi_lambda, kernel_data) {
        let ctx = KernelContext::default();
        let tw = weak.t;
        let y0 = kernel_value(
            Kernel::Y0,
            Representation::Bessel,
            tw,
            F::one(),
            *lambda,
            &params,
            &ctx,
        )?;
        let y1 = kernel_value(
            Kernel::Y1,
            Representation::Bessel,
            tw,
            F::one(),
            *lambda,
            &params,
            &ctx,
        )?;
        let hist = &history[..weak_history_len];
        let ss: Vec<F> = hist.iter().map(|h| h.0).collect();
        let gs = hist
            .iter()
            .map(|&(s, g)| {
                kernel_value(
                    Kernel::Y1,
                    Representation::Bessel,
                    tw,
                    s,
                    *lambda,
                    &params,
                    &ctx,
                )
                .map(|y| y * g)
            })
            .collect::<Result<Vec<F>>>()?;
        weak.kernel = Some(KernelWeakData {
            lambda: *lambda,
            lhs: weak_lhs,
            data_term: cfg.eps * (y0 * d0 + y1 * d1),
            duhamel: trapezoid(&ss, &gs),
        });
    }

    Ok(Integration {
        diagnostics,
        crossings,
        weak,
        max_cone_excess: if max_cone_excess.is_finite() {
            max_cone_excess
        } else {
            F::zero()
        },
        energy_growth,
        t_end: t,
        steps,
    })
}

/// Runs a configuration: linear dry run, main run, and the `dr/2` confirmation
/// of a threshold crossing.
pub fn run<F: Real>(cfg: &SimConfig<F>) -> Result<SimResult<F>> {
    cfg.validate()?;
    if cfg.nonlinear && cfg.eps > F::zero() {
        let dry = SimConfig {
            nonlinear: false,
            ..cfg.clone()
        };
        integrate(
            &dry,
            cfg.dr,
            &IntegrateOptions {
                max_steps: Some(DRY_RUN_STEPS),
                with_aux: false,
                with_kernel: false,
            },
        )?;
    }
    let main = integrate(
        cfg,
        cfg.dr,
        &IntegrateOptions {
            max_steps: None,
            with_aux: true,
            with_kernel: true,
        },
    )?;
    let t_num = main
        .crossings
        .iter()
        .find(|c| c.amplitude == cfg.blowup_amplitude)
        .and_then(|c| c.time);
    let (mut blew_up, mut uncertainty, mut agreement) = (t_num.is_some(), None, None);
    if let (Some(t1), true) = (t_num, cfg.refine) {
        let fine_cfg = cfg.clone().with_dr(cfg.dr * F::lit(0.5));
        let fine = integrate(
            &fine_cfg,
            fine_cfg.dr,
            &IntegrateOptions {
                max_steps: None,
                with_aux: false,
                with_kernel: false,
            },
        )?;
        let t2 = fine
            .crossings
            .iter()
            .find(|c| c.amplitude == cfg.blowup_amplitude)
            .and_then(|c| c.time);
        match t2 {
            Some(t2) => {
                let diff = (t1 - t2).abs();
                uncertainty = Some(diff);
                agreement = Some(diff / t2);
                blew_up = diff / t2 <= F::lit(REFINEMENT_TOLERANCE);
            }
            None => blew_up = false,
        }
    }
    let weak_residual = one_on_cone_residual(&main.weak);
    Ok(SimResult {
        config: cfg.clone(),
        blew_up,
        t_num,
        uncertainty,
        refinement_agreement: agreement,
        threshold_times: main.crossings,
        diagnostics: main.diagnostics,
        weak: main.weak,
        weak_residual,
        max_cone_excess: main.max_cone_excess,
        energy_growth: main.energy_growth,
        t_end: main.t_end,
        steps: main.steps,
    })
}

fn one_on_cone_residual<F: Real>(w: &WeakSnapshot<F>) -> F {
    let lhs = w.u_prime - w.u_prime_initial;
    let scale = w.u_prime_initial.abs() + w.u_prime.abs() + w.source_integral.abs();
    if scale > F::zero() {
        (lhs - w.source_integral).abs() / scale
    } else {
        F::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeakTest {
    /// `ψ ≡ 1` on the cone: `U'(t) - U'(1) = ∫₁^t s^{1-p} ∫|u|^p dx ds`.
    OneOnCone,
    /// `ψ(s,x) = y₁(t,s;λ) φ_λ(x)`, the Duhamel form with the kernel pair.
    KernelTest,
}

/// Relative residual of the chosen weak-form identity at the snapshot time.
pub fn weak_residual<F: Real>(sim: &SimResult<F>, test: WeakTest) -> Result<F> {
    match test {
        WeakTest::OneOnCone => Ok(one_on_cone_residual(&sim.weak)),
        WeakTest::KernelTest => {
            let k = sim
                .weak
                .kernel
                .ok_or_else(|| Error::InvalidConfig("run had no kernel_test_lambda".into()))?;
            let rhs = k.data_term + k.duhamel;
            let scale = k.lhs.abs().max(rhs.abs());
            Ok(if scale > F::zero() {
                (k.lhs - rhs).abs() / scale
            } else {
                F::zero()
            })
        }
    }
}
