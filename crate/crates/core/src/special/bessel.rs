//! Real-order modified Bessel functions `I_ν` and `K_ν`.
//!
//! `I_ν` is summed from its ascending series, switching to the large-argument
//! asymptotic expansion once `z >= max(25, 2ν²)`. `K_ν` (and an independent
//! `I_ν`) come from Temme's series for `x < 2` and Steed's continued fraction
//! beyond, both seeded with the CF1 ratio `I'_ν / I_ν`. Every routine has an
//! exponentially scaled twin (`e^{-z} I_ν`, `e^{z} K_ν`) for large arguments.

use super::gamma::{ln_gamma, temme_gammas};
use super::SpecialEvalConfig;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Order `ν >= 0` of a modified Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder<F>(F);

impl<F: Real> BesselOrder<F> {
    pub fn new(nu: F) -> Result<Self> {
        if !nu.is_finite() || nu < F::zero() {
            return Err(Error::domain(
                "BesselOrder",
                format!("order must be finite and >= 0, got {nu}"),
            ));
        }
        Ok(Self(nu))
    }

    /// `ν = 1 / (2(1 - k))`, the order attached to the metric exponent `k ∈ [0, 1)`.
    pub fn from_metric_exponent(k: F) -> Result<Self> {
        if !(k >= F::zero() && k < F::one()) {
            return Err(Error::domain(
                "BesselOrder",
                format!("metric exponent must lie in [0, 1), got {k}"),
            ));
        }
        Self::new(F::one() / (F::lit(2.0) * (F::one() - k)))
    }

    #[inline]
    pub fn value(self) -> F {
        self.0
    }

    /// True when `ν` lies within `delta` of an integer.
    pub fn is_near_integer(self, delta: F) -> bool {
        (self.0 - self.0.round()).abs() < delta
    }
}

/// `e^{-x} I_ν(x)`, `e^{x} K_ν(x)` and their `x`-derivatives (scaled the same way).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBesselPair<F> {
    pub i: F,
    pub k: F,
    pub ip: F,
    pub kp: F,
}

/// Argument above which `I_ν` switches from the ascending series to the
/// asymptotic expansion.
pub fn i_asymptotic_switch<F: Real>(nu: F) -> F {
    F::lit(25.0).max(F::lit(2.0) * nu * nu)
}

/// Ascending series for `e^{-z} I_ν(z)`, `ν >= 0`, `z > 0`.
pub fn bessel_i_series_scaled<F: Real>(nu: F, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    let half = z * F::lit(0.5);
    let log_first = nu * half.ln() - ln_gamma(nu + F::one()) - z;
    let mut term = log_first.exp();
    let quarter_z2 = half * half;
    let mut sum = term;
    let mut small_run = 0;
    for m in 1..cfg.max_terms {
        let mf = F::from_usize_lossy(m);
        term = term * quarter_z2 / (mf * (mf + nu));
        sum += term;
        if term <= cfg.series_tolerance * sum {
            small_run += 1;
            if small_run == 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    if term == F::zero() {
        // Underflowed prefactor: the series value is below the representable range.
        return Ok(sum);
    }
    Err(Error::NonConvergence {
        what: "bessel_i series",
        terms: cfg.max_terms,
    })
}

/// Large-argument expansion of `e^{-z} I_ν(z)`.
pub fn bessel_i_asymptotic_scaled<F: Real>(nu: F, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    let mu = F::lit(4.0) * nu * nu;
    let mut term = F::one();
    let mut sum = F::one();
    let eight_z = F::lit(8.0) * z;
    let mut last_abs = F::infinity();
    for k in 1..cfg.max_terms {
        let kf = F::from_usize_lossy(k);
        let odd = F::lit(2.0) * kf - F::one();
        term = -term * (mu - odd * odd) / (kf * eight_z);
        let abs = term.abs();
        if abs > last_abs {
            // Divergent tail; accept only if already at working precision.
            if last_abs <= F::lit(16.0) * cfg.series_tolerance * sum.abs() {
                break;
            }
            return Err(Error::NonConvergence {
                what: "bessel_i asymptotic",
                terms: k,
            });
        }
        sum += term;
        last_abs = abs;
        if abs <= cfg.series_tolerance * sum.abs() {
            break;
        }
    }
    Ok(sum / (F::TAU() * z).sqrt())
}

/// `e^{-z} I_ν(z)` for `ν >= 0`, `z >= 0`.
pub fn bessel_i_scaled<F: Real>(nu: BesselOrder<F>, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    let nu = nu.value();
    if !(z >= F::zero()) {
        return Err(Error::domain(
            "bessel_i",
            format!("argument must be >= 0, got {z}"),
        ));
    }
    if z == F::zero() {
        return Ok(if nu == F::zero() { F::one() } else { F::zero() });
    }
    if z < i_asymptotic_switch(nu) {
        bessel_i_series_scaled(nu, z, cfg)
    } else {
        bessel_i_asymptotic_scaled(nu, z, cfg)
    }
}

/// `I_ν(z)` for `ν >= 0`, `z >= 0`.
pub fn bessel_i<F: Real>(nu: BesselOrder<F>, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    let scaled = bessel_i_scaled(nu, z, cfg)?;
    unscale(scaled, z, "bessel_i")
}

fn unscale<F: Real>(scaled: F, exponent: F, what: &'static str) -> Result<F> {
    if scaled == F::zero() {
        return Ok(scaled);
    }
    let log_mag = scaled.abs().ln() + exponent;
    if log_mag >= F::max_exp_arg() {
        return Err(Error::Overflow {
            what,
            log_magnitude: log_mag.to_f64_lossy(),
        });
    }
    Ok(scaled * exponent.exp())
}

const CF_MAX_ITER: usize = 200_000;

/// Temme/Steed evaluation of the scaled pair for `ν >= 0`, `x > 0`.
pub fn bessel_ik_scaled<F: Real>(
    nu: BesselOrder<F>,
    x: F,
    cfg: &SpecialEvalConfig<F>,
) -> Result<ScaledBesselPair<F>> {
    let xnu = nu.value();
    if !(x > F::zero()) || !x.is_finite() {
        return Err(Error::domain(
            "bessel_k",
            format!("argument must be finite and > 0, got {x}"),
        ));
    }
    let eps = cfg.series_tolerance.max(F::epsilon());
    let tiny = F::min_positive_value().sqrt();
    let half = F::lit(0.5);
    let two = F::lit(2.0);
    let nl = (xnu + half).floor();
    let nl_count = nl.to_usize().unwrap_or(0);
    let xmu = xnu - nl;
    let xmu2 = xmu * xmu;
    let xi = x.recip();
    let xi2 = two * xi;

    // CF1 (modified Lentz) for I'_ν / I_ν.
    let mut h = (xnu * xi).max(tiny);
    let mut b = xi2 * xnu;
    let mut d = F::zero();
    let mut c = h;
    let mut converged = false;
    for _ in 0..CF_MAX_ITER {
        b += xi2;
        d = (b + d).recip();
        c = b + c.recip();
        let del = c * d;
        h = del * h;
        if (del - F::one()).abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "bessel CF1",
            terms: CF_MAX_ITER,
        });
    }

    // Downward recurrence from ν to μ = ν - nl, starting from an arbitrary scale.
    let mut ril = F::one();
    let mut ripl = h * ril;
    let ril1 = ril;
    let rip1 = ripl;
    let mut fact = xnu * xi;
    for _ in 0..nl_count {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;

    // Scaled K_μ and K_{μ+1}.
    let (rkmu, rk1) = if x < two {
        let x2 = half * x;
        let pimu = F::PI() * xmu;
        let fact = if pimu.abs() < eps {
            F::one()
        } else {
            pimu / pimu.sin()
        };
        let dd = -x2.ln();
        let e = xmu * dd;
        let fact2 = if e.abs() < eps {
            F::one()
        } else {
            e.sinh() / e
        };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * dd);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = half * ee / gampl;
        let mut q = half / (ee * gammi);
        let mut cc = F::one();
        let dsq = x2 * x2;
        let mut sum1 = p;
        let mut done = false;
        for i in 1..cfg.max_terms.max(50) {
            let fi = F::from_usize_lossy(i);
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cc = cc * dsq / fi;
            p = p / (fi - xmu);
            q = q / (fi + xmu);
            let del = cc * ff;
            sum += del;
            let del1 = cc * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * eps {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NonConvergence {
                what: "bessel_k Temme series",
                terms: cfg.max_terms,
            });
        }
        let scale = x.exp();
        (sum * scale, sum1 * xi2 * scale)
    } else {
        let mut b = two * (F::one() + x);
        let mut d = b.recip();
        let mut h = d;
        let mut delh = d;
        let mut q1 = F::zero();
        let mut q2 = F::one();
        let a1 = F::lit(0.25) - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = F::one() + q * delh;
        let mut done = false;
        for i in 2..CF_MAX_ITER {
            let fi = F::from_usize_lossy(i);
            a -= two * (fi - F::one());
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += two;
            d = (b + a * d).recip();
            delh = (b * d - F::one()) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < eps {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NonConvergence {
                what: "bessel_k Steed CF2",
                terms: CF_MAX_ITER,
            });
        }
        let h = a1 * h;
        let rkmu = (F::PI() / (two * x)).sqrt() / s;
        let rk1 = rkmu * (xmu + x + half - h) * xi;
        (rkmu, rk1)
    };

    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let ri = rimu * ril1 / ril;
    let rip = rimu * rip1 / ril;
    let mut rkmu = rkmu;
    let mut rk1 = rk1;
    for i in 1..=nl_count {
        let rktemp = (xmu + F::from_usize_lossy(i)) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    let rk = rkmu;
    let rkp = xnu * xi * rkmu - rk1;
    // The K recurrence yields K' directly; scaling e^{x} on K and K' is shared.
    Ok(ScaledBesselPair {
        i: ri,
        k: rk,
        ip: rip,
        kp: rkp,
    })
}

/// `e^{z} K_ν(z)` for `z > 0`.
pub fn bessel_k_scaled<F: Real>(nu: BesselOrder<F>, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    Ok(bessel_ik_scaled(nu, z, cfg)?.k)
}

/// `K_ν(z)` for `z > 0`.
pub fn bessel_k<F: Real>(nu: BesselOrder<F>, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    let scaled = bessel_k_scaled(nu, z, cfg)?;
    unscale(scaled, -z, "bessel_k")
}

/// `e^{-z} I_α(z)` for any real order `α`; negative non-integer orders use
/// `I_{-μ} = I_μ + (2/π) sin(μπ) K_μ`.
pub fn bessel_i_scaled_any_order<F: Real>(order: F, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    if order >= F::zero() {
        return bessel_i_scaled(BesselOrder::new(order)?, z, cfg);
    }
    let mu = -order;
    let i_mu = bessel_i_scaled(BesselOrder::new(mu)?, z, cfg)?;
    let s = (F::PI() * mu).sin();
    if s == F::zero() || z == F::zero() {
        return Ok(i_mu);
    }
    let k_mu = bessel_k_scaled(BesselOrder::new(mu)?, z, cfg)?;
    Ok(i_mu + F::lit(2.0) / F::PI() * s * k_mu * (-F::lit(2.0) * z).exp())
}

/// `e^{z} K_α(z)` for any real order (`K_{-α} = K_α`).
pub fn bessel_k_scaled_any_order<F: Real>(order: F, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    bessel_k_scaled(BesselOrder::new(order.abs())?, z, cfg)
}

/// Scaled derivatives from the order-lowering recurrences
/// `I'_ν = -(ν/z) I_ν + I_{ν-1}` and `K'_ν = -(ν/z) K_ν - K_{ν-1}`.
///
/// Returns `(e^{-z} I_ν, e^{-z} I'_ν, e^{z} K_ν, e^{z} K'_ν)`.
pub fn bessel_scaled_with_derivatives<F: Real>(
    nu: BesselOrder<F>,
    z: F,
    cfg: &SpecialEvalConfig<F>,
) -> Result<(F, F, F, F)> {
    let v = nu.value();
    let i = bessel_i_scaled(nu, z, cfg)?;
    let i_lower = bessel_i_scaled_any_order(v - F::one(), z, cfg)?;
    let k = bessel_k_scaled(nu, z, cfg)?;
    let k_lower = bessel_k_scaled_any_order(v - F::one(), z, cfg)?;
    let ratio = v / z;
    Ok((i, -ratio * i + i_lower, k, -ratio * k - k_lower))
}
