use serde::{Deserialize, Serialize};

use super::{
    angle_bracket, eta_q, kernel_value, xi_q, AuxFnConfig, Kernel, KernelContext, KernelEval,
    Representation, SpacetimeParams,
};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// An existential constant estimated as an extremum over a declared grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedConstant<F> {
    pub value: F,
    /// Human-readable description of the grid the extremum was taken over.
    pub grid: String,
    pub samples: usize,
}

/// Sampling grid for the auxiliary-function bound ratios: `t` log-spaced on
/// `[1, t_max]`, `s` drawn from the same nodes with `s <= t`, and
/// `r` uniform on `[0, A_k(s) + R]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundGrid<F> {
    pub t_max: F,
    pub t_points: usize,
    pub r_points: usize,
}

impl<F: Real> BoundGrid<F> {
    pub fn new(t_max: F, t_points: usize, r_points: usize) -> Self {
        Self {
            t_max,
            t_points,
            r_points,
        }
    }

    /// Grid with every spacing halved; contains all nodes of `self`.
    pub fn doubled(&self) -> Self {
        Self {
            t_max: self.t_max,
            t_points: 2 * self.t_points - 1,
            r_points: 2 * self.r_points - 1,
        }
    }

    pub fn times(&self) -> Vec<F> {
        let n = self.t_points.max(2);
        let lt = self.t_max.ln();
        (0..n)
            .map(|i| (lt * F::from_usize_lossy(i) / F::from_usize_lossy(n - 1)).exp())
            .collect()
    }

    pub fn radii(&self, r_max: F) -> Vec<F> {
        let n = self.r_points.max(2);
        (0..n)
            .map(|i| r_max * F::from_usize_lossy(i) / F::from_usize_lossy(n - 1))
            .collect()
    }

    fn describe(&self) -> String {
        format!(
            "t log-spaced on [1, {}] ({} nodes), r uniform on [0, A_k + R] ({} nodes)",
            self.t_max, self.t_points, self.r_points
        )
    }
}

/// Fits `B₀ = min ξ_q ⟨A_k(s)⟩^{q+1}` and `B₁ = min η_q ⟨A_k(t)⟩ ⟨A_k(s)⟩^q / (st)^{k/2}`
/// over `t >= s >= 1`, `|x| <= A_k(s) + R`.
pub fn fit_b0_b1<F: Real>(
    params: &SpacetimeParams<F>,
    cfg: &AuxFnConfig<F>,
    grid: &BoundGrid<F>,
) -> Result<(FittedConstant<F>, FittedConstant<F>)> {
    let times = grid.times();
    let q = cfg.q;
    let (mut b0, mut b1) = (F::infinity(), F::infinity());
    let mut samples = 0;
    for (i, &t) in times.iter().enumerate() {
        let at = angle_bracket(params.light_cone_a(t));
        for &s in &times[..=i] {
            let as_ = params.light_cone_a(s);
            let bs = angle_bracket(as_);
            for r in grid.radii(as_ + cfg.r_support) {
                let xi = xi_q(t, s, r, params, cfg)?;
                let eta = eta_q(t, s, r, params, cfg)?;
                b0 = b0.min(xi * bs.powf(q + F::one()));
                b1 = b1.min(eta * at * bs.powf(q) / (s * t).powf(params.k * F::lit(0.5)));
                samples += 1;
            }
        }
    }
    let grid = grid.describe();
    Ok((
        FittedConstant {
            value: b0,
            grid: grid.clone(),
            samples,
        },
        FittedConstant {
            value: b1,
            grid,
            samples,
        },
    ))
}

/// Fits `B₂ = max ξ_q(t,t,x) ⟨A_k(t)⟩^{(n-1)/2} ⟨A_k(t) - |x|⟩^{q-(n-3)/2}`
/// over `t ∈ [1, t_max]`, `|x| <= A_k(t) + R`. Requires `q > (n-3)/2`.
pub fn fit_b2<F: Real>(
    params: &SpacetimeParams<F>,
    cfg: &AuxFnConfig<F>,
    grid: &BoundGrid<F>,
) -> Result<FittedConstant<F>> {
    let n = params.n_real();
    let shift = (n - F::lit(3.0)) * F::lit(0.5);
    if !(cfg.q > shift) {
        return Err(Error::domain(
            "fit_b2",
            format!("need q > (n-3)/2 = {shift}, got {}", cfg.q),
        ));
    }
    let mut b2 = F::zero();
    let mut samples = 0;
    for t in grid.times() {
        let a = params.light_cone_a(t);
        for r in grid.radii(a + cfg.r_support) {
            let xi = xi_q(t, t, r, params, cfg)?;
            let ratio = xi
                * angle_bracket(a).powf((n - F::one()) * F::lit(0.5))
                * angle_bracket(a - r).powf(cfg.q - shift);
            b2 = b2.max(ratio);
            samples += 1;
        }
    }
    Ok(FittedConstant {
        value: b2,
        grid: grid.describe(),
        samples,
    })
}

/// Worst scaled margins of the lower bounds
/// `y₀ >= cosh(λΔ)` and `y₁ >= (st)^{k/2} sinh(λΔ)/λ`, `Δ = φ_k(t) - φ_k(s)`.
///
/// Margins are `(y - bound) / max(1, |bound|)`; a value below `-1e-9` is a violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinPrincipleReport<F> {
    pub worst_y0: F,
    pub worst_y1: F,
    pub samples: usize,
}

pub fn check_min_principle<F: Real>(
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
    points: &[(F, F, F)],
) -> Result<MinPrincipleReport<F>> {
    let (mut w0, mut w1) = (F::infinity(), F::infinity());
    for &(t, s, lambda) in points {
        let delta = lambda * (params.phi(t) - params.phi(s));
        let y0 = kernel_value(
            Kernel::Y0,
            Representation::Bessel,
            t,
            s,
            lambda,
            params,
            ctx,
        )?;
        let y1 = kernel_value(
            Kernel::Y1,
            Representation::Bessel,
            t,
            s,
            lambda,
            params,
            ctx,
        )?;
        let b0 = delta.cosh();
        let b1 = (s * t).powf(params.k * F::lit(0.5)) * delta.sinh() / lambda;
        w0 = w0.min((y0 - b0) / b0.abs().max(F::one()));
        w1 = w1.min((y1 - b1) / b1.abs().max(F::one()));
    }
    Ok(MinPrincipleReport {
        worst_y0: w0,
        worst_y1: w1,
        samples: points.len(),
    })
}

/// One row of the kernel sweep export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelCsvRow<F> {
    pub k: F,
    pub n: u32,
    pub t: F,
    pub s: F,
    pub lambda: F,
    pub y0: F,
    pub y1: F,
    pub ode_residual_y0: F,
    pub ode_residual_y1: F,
    /// Largest pairwise relative disagreement of the three representations (`k = 2/3` only).
    pub rep_disagreement: Option<F>,
}

fn rel_gap<F: Real>(a: F, b: F) -> F {
    let scale = a.abs().max(b.abs());
    if scale == F::zero() {
        F::zero()
    } else {
        (a - b).abs() / scale
    }
}

/// Largest pairwise relative disagreement of Bessel, elementary and
/// hypergeometric values of `kernel` at one point (`k = 2/3`).
pub fn representation_disagreement<F: Real>(
    kernel: Kernel,
    t: F,
    s: F,
    lambda: F,
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
) -> Result<F> {
    let b = kernel_value(kernel, Representation::Bessel, t, s, lambda, params, ctx)?;
    let e = kernel_value(
        kernel,
        Representation::Elementary23,
        t,
        s,
        lambda,
        params,
        ctx,
    )?;
    let h = kernel_value(
        kernel,
        Representation::Hypergeometric23,
        t,
        s,
        lambda,
        params,
        ctx,
    )?;
    Ok(rel_gap(b, e).max(rel_gap(b, h)).max(rel_gap(e, h)))
}

/// Evaluates both kernels with residuals at each `(t, s, λ)`.
pub fn kernel_grid_rows<F: Real>(
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
    points: &[(F, F, F)],
) -> Result<Vec<KernelCsvRow<F>>> {
    points
        .iter()
        .map(|&(t, s, lambda)| {
            let e0 = KernelEval::in_representation(
                Kernel::Y0,
                Representation::Bessel,
                t,
                s,
                lambda,
                params,
                ctx,
            )?;
            let e1 = KernelEval::in_representation(
                Kernel::Y1,
                Representation::Bessel,
                t,
                s,
                lambda,
                params,
                ctx,
            )?;
            let rep_disagreement = if params.is_two_thirds() && t > s {
                Some(
                    representation_disagreement(Kernel::Y0, t, s, lambda, params, ctx)?.max(
                        representation_disagreement(Kernel::Y1, t, s, lambda, params, ctx)?,
                    ),
                )
            } else {
                None
            };
            Ok(KernelCsvRow {
                k: params.k,
                n: params.n,
                t,
                s,
                lambda,
                y0: e0.value,
                y1: e1.value,
                ode_residual_y0: e0.ode_residual,
                ode_residual_y1: e1.ode_residual,
                rep_disagreement,
            })
        })
        .collect()
}
