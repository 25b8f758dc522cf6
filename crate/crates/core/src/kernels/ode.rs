use serde::{Deserialize, Serialize};

use super::SpacetimeParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{
    bessel_i_scaled_any_order, bessel_k_scaled_any_order, kummer_m, SpecialEvalConfig,
};

/// Which of the two Cauchy problems: `y₀(s) = 1, y₀'(s) = 0` or `y₁(s) = 0, y₁'(s) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Y0,
    Y1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Bessel,
    #[serde(rename = "elementary_2_3")]
    Elementary23,
    #[serde(rename = "hypergeometric_2_3")]
    Hypergeometric23,
}

/// Deliberate corruption used to confirm that the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFault {
    #[default]
    None,
    /// Scale `K_ν` by `e^{-z}` where `e^{+z}` is expected.
    FlipKScaling,
}

/// Evaluation settings threaded through every kernel routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelContext<F> {
    pub special: SpecialEvalConfig<F>,
    pub fault: KernelFault,
}

impl<F: Real> Default for KernelContext<F> {
    fn default() -> Self {
        Self {
            special: SpecialEvalConfig::default(),
            fault: KernelFault::None,
        }
    }
}

impl<F: Real> KernelContext<F> {
    pub fn with_fault(fault: KernelFault) -> Self {
        Self {
            fault,
            ..Self::default()
        }
    }

    /// `e^{-z} I_α(z)` for any real order `α >= -1`.
    pub fn i_scaled(&self, order: F, z: F) -> Result<F> {
        bessel_i_scaled_any_order(order, z, &self.special)
    }

    /// `e^{z} K_α(z)`, or the faulted variant.
    pub fn k_scaled(&self, order: F, z: F) -> Result<F> {
        let k = bessel_k_scaled_any_order(order, z, &self.special)?;
        Ok(match self.fault {
            KernelFault::None => k,
            KernelFault::FlipKScaling => k * (-F::lit(2.0) * z).exp(),
        })
    }

    /// Scaled `(I_ν, I_ν', K_ν, K_ν')` with derivatives from the order-lowering recurrences.
    pub fn scaled_with_derivatives(&self, nu: F, z: F) -> Result<(F, F, F, F)> {
        let i = self.i_scaled(nu, z)?;
        let il = self.i_scaled(nu - F::one(), z)?;
        let k = self.k_scaled(nu, z)?;
        let kl = self.k_scaled(nu - F::one(), z)?;
        let r = nu / z;
        Ok((i, -r * i + il, k, -r * k - kl))
    }
}

/// One sampled kernel value with its ODE residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEval<F> {
    pub kernel: Kernel,
    pub t: F,
    pub s: F,
    pub lambda: F,
    pub value: F,
    pub representation: Representation,
    /// `|∂_t² y - λ² t^{-2k} y|` by Richardson-refined 5-point differences.
    pub ode_residual: F,
}

fn check_times<F: Real>(what: &'static str, t: F, s: F, lambda: F) -> Result<()> {
    if !(s >= F::one() && t >= s && t.is_finite()) {
        return Err(Error::domain(
            what,
            format!("need t >= s >= 1, got t = {t}, s = {s}"),
        ));
    }
    if !(lambda > F::zero() && lambda.is_finite()) {
        return Err(Error::domain(
            what,
            format!("lambda must be > 0, got {lambda}"),
        ));
    }
    Ok(())
}

fn finite<F: Real>(what: &'static str, v: F) -> Result<F> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow {
            what,
            log_magnitude: f64::INFINITY,
        })
    }
}

fn exp_checked<F: Real>(what: &'static str, x: F) -> Result<F> {
    if x >= F::max_exp_arg() {
        return Err(Error::Overflow {
            what,
            log_magnitude: x.to_f64_lossy(),
        });
    }
    Ok(x.exp())
}

fn bessel_y0<F: Real>(
    t: F,
    s: F,
    lambda: F,
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
) -> Result<F> {
    let nu = params.nu();
    let a = lambda * params.phi(s);
    let b = lambda * params.phi(t);
    let d = b - a;
    let grow = exp_checked("kernel_y0", d)?;
    let shrink = (-d).exp();
    let bracket = ctx.i_scaled(nu - F::one(), a)? * ctx.k_scaled(nu, b)? * shrink
        + ctx.k_scaled(nu - F::one(), a)? * ctx.i_scaled(nu, b)? * grow;
    finite("kernel_y0", a * (t / s).sqrt() * bracket)
}

fn bessel_y1<F: Real>(
    t: F,
    s: F,
    lambda: F,
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
) -> Result<F> {
    let nu = params.nu();
    let a = lambda * params.phi(s);
    let b = lambda * params.phi(t);
    let d = b - a;
    let grow = exp_checked("kernel_y1", d)?;
    let shrink = (-d).exp();
    let bracket = ctx.k_scaled(nu, a)? * ctx.i_scaled(nu, b)? * grow
        - ctx.i_scaled(nu, a)? * ctx.k_scaled(nu, b)? * shrink;
    finite(
        "kernel_y1",
        (s * t).sqrt() / (F::one() - params.k) * bracket,
    )
}

fn require_two_thirds<F: Real>(what: &'static str, params: &SpacetimeParams<F>) -> Result<()> {
    if params.is_two_thirds() {
        Ok(())
    } else {
        Err(Error::domain(
            what,
            format!("closed form applies only at k = 2/3, got k = {}", params.k),
        ))
    }
}

/// Closed-form `y₀` at `k = 2/3`:
/// `(t/s)^{1/3} cosh Δ - sinh Δ / (3λ s^{1/3})`, `Δ = 3λ(t^{1/3} - s^{1/3})`.
pub fn kernel_y0_elementary_2_3<F: Real>(t: F, s: F, lambda: F) -> Result<F> {
    let (ct, cs) = (t.cbrt(), s.cbrt());
    let delta = F::lit(3.0) * lambda * (ct - cs);
    finite(
        "kernel_y0_elementary",
        ct / cs * delta.cosh() - delta.sinh() / (F::lit(3.0) * lambda * cs),
    )
}

/// Closed-form `y₁` at `k = 2/3`:
/// `((st)^{1/3}/λ - 1/(9λ³)) sinh Δ + (t^{1/3} - s^{1/3}) cosh Δ / (3λ²)`.
pub fn kernel_y1_elementary_2_3<F: Real>(t: F, s: F, lambda: F) -> Result<F> {
    let (ct, cs) = (t.cbrt(), s.cbrt());
    let l2 = lambda * lambda;
    let delta = F::lit(3.0) * lambda * (ct - cs);
    let a = ct * cs / lambda - F::one() / (F::lit(9.0) * l2 * lambda);
    let b = (ct - cs) / (F::lit(3.0) * l2);
    finite("kernel_y1_elementary", a * delta.sinh() + b * delta.cosh())
}

/// `(Ṽ₀, ∂_t Ṽ₀, Ṽ₁, ∂_t Ṽ₁)` at `k = 2/3`, with `Ṽ₀ = e^{-λφ}(λφ + 1)`,
/// `Ṽ₁ = e^{λφ}(λφ - 1)` and `φ = 3 t^{1/3}`.
pub fn hypergeometric_v_tilde<F: Real>(t: F, lambda: F) -> (F, F, F, F) {
    let phi = F::lit(3.0) * t.cbrt();
    let dphi = t.powf(-F::lit(2.0) / F::lit(3.0));
    let x = lambda * phi;
    let (em, ep) = ((-x).exp(), x.exp());
    let c = lambda * lambda * phi * dphi;
    (em * (x + F::one()), -c * em, ep * (x - F::one()), c * ep)
}

/// `Ṽ₀` recovered from Kummer's function through
/// `z³ M(z; 2, 4) / 6 - z - 2 = e^z (z - 2)` at `z = -2λφ`.
///
/// Loses accuracy like `e^{2λφ}` and is meant for moderate `λφ` only.
pub fn hypergeometric_v_tilde_kummer<F: Real>(
    t: F,
    lambda: F,
    cfg: &SpecialEvalConfig<F>,
) -> Result<F> {
    let x = lambda * F::lit(3.0) * t.cbrt();
    let z = -F::lit(2.0) * x;
    let g = z.powi(3) * kummer_m(F::lit(2.0), F::lit(4.0), z, cfg)? / F::lit(6.0) - z - F::lit(2.0);
    Ok(-F::lit(0.5) * x.exp() * g)
}

/// `Ṽ₀ ∂_t Ṽ₁ - Ṽ₁ ∂_t Ṽ₀`, which should equal `18 λ³`.
pub fn hypergeometric_wronskian<F: Real>(t: F, lambda: F) -> F {
    let (v0, d0, v1, d1) = hypergeometric_v_tilde(t, lambda);
    v0 * d1 - v1 * d0
}

/// `(y₀, y₁)` at `k = 2/3` assembled from the fundamental system `Ṽ₀, Ṽ₁`
/// and their Wronskian `18 λ³`; exponentials are combined before evaluation.
pub fn kernel_pair_2_3_hypergeometric<F: Real>(
    t: F,
    s: F,
    lambda: F,
    params: &SpacetimeParams<F>,
) -> Result<(F, F)> {
    check_times("kernel_pair_2_3_hypergeometric", t, s, lambda)?;
    require_two_thirds("kernel_pair_2_3_hypergeometric", params)?;
    Ok(hypergeometric_pair_unchecked(t, s, lambda))
}

fn hypergeometric_pair_unchecked<F: Real>(t: F, s: F, lambda: F) -> (F, F) {
    let three = F::lit(3.0);
    let (phi_s, phi_t) = (three * s.cbrt(), three * t.cbrt());
    let dphi_s = s.powf(-F::lit(2.0) / three);
    let (xs, xt) = (lambda * phi_s, lambda * phi_t);
    let delta = xt - xs;
    let (ep, em) = (delta.exp(), (-delta).exp());
    let w = F::lit(18.0) * lambda.powi(3);
    let c = lambda * lambda * phi_s * dphi_s;
    let y0 = c * ((xt + F::one()) * em + (xt - F::one()) * ep) / w;
    let y1 = ((xs + F::one()) * (xt - F::one()) * ep - (xs - F::one()) * (xt + F::one()) * em) / w;
    (y0, y1)
}

/// Value of `y₀` or `y₁` at `(t, s, λ)` in the chosen representation.
///
/// Does not enforce `t >= s`, so that finite-difference stencils may straddle
/// the initial time.
pub fn kernel_value<F: Real>(
    kernel: Kernel,
    rep: Representation,
    t: F,
    s: F,
    lambda: F,
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
) -> Result<F> {
    match rep {
        Representation::Bessel => match kernel {
            Kernel::Y0 => bessel_y0(t, s, lambda, params, ctx),
            Kernel::Y1 => bessel_y1(t, s, lambda, params, ctx),
        },
        Representation::Elementary23 => {
            require_two_thirds("kernel elementary form", params)?;
            match kernel {
                Kernel::Y0 => kernel_y0_elementary_2_3(t, s, lambda),
                Kernel::Y1 => kernel_y1_elementary_2_3(t, s, lambda),
            }
        }
        Representation::Hypergeometric23 => {
            require_two_thirds("kernel hypergeometric form", params)?;
            let (y0, y1) = hypergeometric_pair_unchecked(t, s, lambda);
            finite(
                "kernel hypergeometric form",
                match kernel {
                    Kernel::Y0 => y0,
                    Kernel::Y1 => y1,
                },
            )
        }
    }
}

/// Second derivative by the 5-point stencil at `h` and `h/2`, Richardson-combined.
pub fn second_derivative_fd<F: Real>(x: F, h: F, mut f: impl FnMut(F) -> Result<F>) -> Result<F> {
    let mut stencil = |h: F| -> Result<F> {
        let two = F::lit(2.0);
        let v = -f(x + two * h)? + F::lit(16.0) * f(x + h)? - F::lit(30.0) * f(x)?
            + F::lit(16.0) * f(x - h)?
            - f(x - two * h)?;
        Ok(v / (F::lit(12.0) * h * h))
    };
    let coarse = stencil(h)?;
    let fine = stencil(h * F::lit(0.5))?;
    Ok(fine + (fine - coarse) / F::lit(15.0))
}

fn evaluate<F: Real>(
    kernel: Kernel,
    rep: Representation,
    t: F,
    s: F,
    lambda: F,
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
) -> Result<KernelEval<F>> {
    check_times("kernel", t, s, lambda)?;
    let value = kernel_value(kernel, rep, t, s, lambda, params, ctx)?;
    let h = F::lit(1e-3);
    let d2 = second_derivative_fd(t, h, |x| {
        kernel_value(kernel, rep, x, s, lambda, params, ctx)
    })?;
    let ode_residual = (d2 - lambda * lambda * t.powf(-F::lit(2.0) * params.k) * value).abs();
    Ok(KernelEval {
        kernel,
        t,
        s,
        lambda,
        value,
        representation: rep,
        ode_residual,
    })
}

/// `y₀(t, s; λ, k) = λ (t/s)^{1/2} φ_k(s) [I_{ν-1}(λφ_k(s)) K_ν(λφ_k(t)) + K_{ν-1}(λφ_k(s)) I_ν(λφ_k(t))]`.
pub fn kernel_y0<F: Real>(
    t: F,
    s: F,
    lambda: F,
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
) -> Result<KernelEval<F>> {
    evaluate(
        Kernel::Y0,
        Representation::Bessel,
        t,
        s,
        lambda,
        params,
        ctx,
    )
}

/// `y₁(t, s; λ, k) = (1-k)^{-1} (st)^{1/2} [K_ν(λφ_k(s)) I_ν(λφ_k(t)) - I_ν(λφ_k(s)) K_ν(λφ_k(t))]`.
pub fn kernel_y1<F: Real>(
    t: F,
    s: F,
    lambda: F,
    params: &SpacetimeParams<F>,
    ctx: &KernelContext<F>,
) -> Result<KernelEval<F>> {
    evaluate(
        Kernel::Y1,
        Representation::Bessel,
        t,
        s,
        lambda,
        params,
        ctx,
    )
}

impl<F: Real> KernelEval<F> {
    /// Same kernel and point in another representation.
    pub fn in_representation(
        kernel: Kernel,
        rep: Representation,
        t: F,
        s: F,
        lambda: F,
        params: &SpacetimeParams<F>,
        ctx: &KernelContext<F>,
    ) -> Result<Self> {
        evaluate(kernel, rep, t, s, lambda, params, ctx)
    }
}
