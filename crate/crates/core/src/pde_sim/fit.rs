use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::solver::{run, SimResult};
use crate::error::{Error, Result};
use crate::exponents::{LawKind, LifespanLaw};
use crate::iteration::{FittedConstants, FrameCheck};
use crate::kernels::FittedConstant;
use crate::scalar::Real;

/// Relative slope tolerance for "consistent" in sweep reports.
pub const SLOPE_TOLERANCE: f64 = 0.3;
pub const MIN_SWEEP_POINTS: usize = 4;

/// `count` log-spaced values from `hi` down to `lo`.
pub fn eps_grid<F: Real>(hi: F, lo: F, count: usize) -> Vec<F> {
    if count < 2 {
        return vec![hi];
    }
    let (a, b) = (hi.ln(), lo.ln());
    (0..count)
        .map(|i| (a + (b - a) * F::from_usize_lossy(i) / F::from_usize_lossy(count - 1)).exp())
        .collect()
}

/// Worker threads for sweeps: `EDES_THREADS` when set to a positive integer,
/// otherwise rayon's default.
pub fn sweep_threads() -> Option<usize> {
    std::env::var("EDES_THREADS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Runs the configurations concurrently; results come back sorted by
/// decreasing `ε`, independent of scheduling.
pub fn sweep<F: Real>(configs: &[SimConfig<F>]) -> Vec<Result<SimResult<F>>> {
    let mut order: Vec<usize> = (0..configs.len()).collect();
    order.sort_by(|&a, &b| {
        configs[b]
            .eps
            .partial_cmp(&configs[a].eps)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let work = || {
        order
            .par_iter()
            .map(|&i| run(&configs[i]))
            .collect::<Vec<_>>()
    };
    match sweep_threads().map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build()) {
        Some(Ok(pool)) => pool.install(work),
        _ => work(),
    }
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFit<F> {
    pub slope: F,
    pub intercept: F,
    pub residuals: Vec<F>,
}

pub fn least_squares<F: Real>(xs: &[F], ys: &[F]) -> Result<LineFit<F>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need >= 2 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = F::from_usize_lossy(xs.len());
    let mx = xs.iter().fold(F::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(F::zero(), |a, &y| a + y) / n;
    let (mut sxx, mut sxy) = (F::zero(), F::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if !(sxx > F::zero()) {
        return Err(Error::InsufficientData("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| y - (slope * x + intercept))
        .collect();
    Ok(LineFit {
        slope,
        intercept,
        residuals,
    })
}

/// Lifespan scaling fit over an ε sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport<F> {
    pub law: LifespanLaw<F>,
    /// `(ε, T_num)` of the runs used.
    pub points: Vec<(F, F)>,
    /// ε values dropped because the run did not blow up.
    pub excluded: Vec<F>,
    pub fitted_slope: F,
    pub predicted_exponent: F,
    pub intercept: F,
    pub residuals: Vec<F>,
    pub relative_error: F,
    pub tolerance: F,
    /// `T_num` strictly decreasing in `ε`.
    pub monotone: bool,
    pub consistent: bool,
    pub verdict: String,
}

/// Fits `log T` (power laws) or `log log T` (exponential laws) against
/// `log(1/ε)` and compares the slope with the predicted exponent.
pub fn fit_lifespan<F: Real>(
    law: LifespanLaw<F>,
    samples: &[(F, Option<F>)],
) -> Result<FitReport<F>> {
    let mut points: Vec<(F, F)> = samples
        .iter()
        .filter_map(|&(e, t)| t.map(|t| (e, t)))
        .collect();
    let excluded: Vec<F> = samples
        .iter()
        .filter(|s| s.1.is_none())
        .map(|s| s.0)
        .collect();
    points.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    if points.len() < MIN_SWEEP_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} blow-up runs, need {MIN_SWEEP_POINTS}",
            points.len()
        )));
    }
    let (hi, lo) = (points[0].0, points[points.len() - 1].0);
    if !(hi / lo >= F::lit(10.0 * (1.0 - 1e-9))) {
        return Err(Error::InsufficientData(format!(
            "ε range {lo}..{hi} spans less than a decade"
        )));
    }
    let xs: Vec<F> = points.iter().map(|p| -p.0.ln()).collect();
    let ys = points
        .iter()
        .map(|&(_, t)| match law.kind {
            LawKind::Power => Ok(t.ln()),
            LawKind::Exponential if t > F::one() => Ok(t.ln().ln()),
            LawKind::Exponential => Err(Error::domain("fit_lifespan", "log log T needs T > 1")),
        })
        .collect::<Result<Vec<F>>>()?;
    let fit = least_squares(&xs, &ys)?;
    let monotone = points.windows(2).all(|w| w[1].1 > w[0].1);
    let relative_error = (fit.slope - law.exponent).abs() / law.exponent.abs();
    let tolerance = F::lit(SLOPE_TOLERANCE);
    let consistent = relative_error <= tolerance;
    let verdict = if consistent {
        "consistent within tolerance"
    } else {
        "inconsistent"
    }
    .to_string();
    Ok(FitReport {
        law,
        points,
        excluded,
        fitted_slope: fit.slope,
        predicted_exponent: law.exponent,
        intercept: fit.intercept,
        residuals: fit.residuals,
        relative_error,
        tolerance,
        monotone,
        consistent,
        verdict,
    })
}

/// Runs the sweep and fits it in one go.
pub fn sweep_and_fit<F: Real>(
    law: LifespanLaw<F>,
    configs: &[SimConfig<F>],
) -> Result<(Vec<SimResult<F>>, FitReport<F>)> {
    let mut sims = Vec::with_capacity(configs.len());
    for r in sweep(configs) {
        sims.push(r?);
    }
    let samples: Vec<(F, Option<F>)> = sims
        .iter()
        .map(|s| (s.config.eps, if s.blew_up { s.t_num } else { None }))
        .collect();
    let report = fit_lifespan(law, &samples)?;
    Ok((sims, report))
}

fn min_ratio<F: Real>(
    grid: String,
    items: impl Iterator<Item = (F, F)>,
) -> Option<FittedConstant<F>> {
    let mut best: Option<F> = None;
    let mut samples = 0;
    for (num, den) in items {
        if den > F::zero() {
            samples += 1;
            let r = num / den;
            best = Some(best.map_or(r, |b: F| b.min(r)));
        }
    }
    best.map(|value| FittedConstant {
        value,
        grid,
        samples,
    })
}

/// Largest `c` with `𝒰(t) >= c ε` over the pre-blow-up diagnostics.
pub fn fit_curly_u_floor<F: Real>(sim: &SimResult<F>) -> Option<FittedConstant<F>> {
    let eps = sim.config.eps;
    min_ratio(
        format!("diagnostics t <= T_num, eps = {eps}"),
        sim.pre_blowup().filter_map(|d| d.curly_u.map(|c| (c, eps))),
    )
}

/// Largest `M` with `𝒰(t) >= M ε^p log(2t/3)` for `t > 3/2`.
pub fn fit_first_log_bound<F: Real>(sim: &SimResult<F>) -> Option<FittedConstant<F>> {
    let (eps, p) = (sim.config.eps, sim.config.p);
    let third = F::lit(2.0) / F::lit(3.0);
    min_ratio(
        format!("diagnostics 3/2 < t <= T_num, eps = {eps}"),
        sim.pre_blowup()
            .filter(|d| d.t > F::lit(1.5))
            .filter_map(|d| d.curly_u.map(|c| (c, eps.powf(p) * (third * d.t).ln()))),
    )
}

/// Largest `K` with `U(t) >= K ε t`.
pub fn fit_linear_growth<F: Real>(sim: &SimResult<F>) -> Option<FittedConstant<F>> {
    let eps = sim.config.eps;
    min_ratio(
        format!("diagnostics t <= T_num, eps = {eps}"),
        sim.pre_blowup().map(|d| (d.u_integral, eps * d.t)),
    )
}

/// Second differences of a nonuniform series, at interior points.
pub fn second_derivative<F: Real>(ts: &[F], ys: &[F]) -> Vec<(F, F)> {
    (1..ts.len().saturating_sub(1))
        .map(|i| {
            let (h0, h1) = (ts[i] - ts[i - 1], ts[i + 1] - ts[i]);
            let d = F::lit(2.0) * (ys[i + 1] * h0 - ys[i] * (h0 + h1) + ys[i - 1] * h1)
                / (h0 * h1 * (h0 + h1));
            (ts[i], d)
        })
        .collect()
}

/// Largest `c` with `U''(t) >= c (R+t)^{-((1-k)n+1)(p-1)} U(t)^p`, with `U''`
/// from second differences of the diagnostics.
pub fn fit_differential_inequality<F: Real>(sim: &SimResult<F>) -> Option<FittedConstant<F>> {
    let cfg = &sim.config;
    let q = ((F::one() - cfg.params.k) * cfg.params.n_real() + F::one()) * (cfg.p - F::one());
    let rows: Vec<_> = sim.pre_blowup().collect();
    let ts: Vec<F> = rows.iter().map(|d| d.t).collect();
    let us: Vec<F> = rows.iter().map(|d| d.u_integral).collect();
    let d2 = second_derivative(&ts, &us);
    let radius = cfg.data_profile.radius;
    min_ratio(
        format!("second differences of U, eps = {}", cfg.eps),
        d2.iter()
            .zip(&us[1..])
            .map(|(&(t, upp), &u)| (upp, (radius + t).powf(-q) * u.abs().powf(cfg.p))),
    )
}

/// Collects the constants a simulation determines: `K` of `U >= Kεt`, `M` of
/// the first logarithmic bound, and the frame constant when supplied.
pub fn fitted_constants<F: Real>(
    sim: &SimResult<F>,
    frame: Option<&FrameCheck<F>>,
) -> FittedConstants<F> {
    FittedConstants {
        k_const: fit_linear_growth(sim),
        m_const: fit_first_log_bound(sim),
        c_frame: frame.map(|f| FittedConstant {
            value: f.c_frame,
            grid: format!("{} diagnostic samples, eps = {}", f.samples, sim.config.eps),
            samples: f.samples,
        }),
        ..FittedConstants::default()
    }
}
