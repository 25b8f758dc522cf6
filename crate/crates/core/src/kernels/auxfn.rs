use serde::{Deserialize, Serialize};

use super::SpacetimeParams;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate_adaptive, AdaptiveTolerance};
use crate::scalar::Real;
use crate::special::yz_phi_scaled;

/// Parameters of the λ-integrals `ξ_q`, `η_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxFnConfig<F> {
    /// Power of `λ` in the integrand; must exceed `-1`.
    pub q: F,
    /// Upper cutoff `λ₀` of the integral.
    pub lambda0: F,
    /// Support radius `R` of the data.
    #[serde(rename = "R", alias = "r_support")]
    pub r_support: F,
    /// Gauss-Legendre nodes per dyadic panel of the fixed rule used by [`XiDiagonalTable`].
    pub quadrature_nodes: usize,
}

impl<F: Real> AuxFnConfig<F> {
    pub fn new(q: F, lambda0: F, r_support: F) -> Result<Self> {
        let c = Self {
            q,
            lambda0,
            r_support,
            quadrature_nodes: 12,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > -F::one()) {
            return Err(Error::InvalidConfig(format!(
                "q must exceed -1, got {}",
                self.q
            )));
        }
        if !(self.lambda0 > F::zero() && self.lambda0.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "lambda0 must be > 0, got {}",
                self.lambda0
            )));
        }
        if !(self.r_support >= F::zero()) {
            return Err(Error::InvalidConfig(format!(
                "R must be >= 0, got {}",
                self.r_support
            )));
        }
        if self.quadrature_nodes < 2 {
            return Err(Error::InvalidConfig("quadrature_nodes must be >= 2".into()));
        }
        Ok(())
    }
}

fn check<F: Real>(what: &'static str, t: F, s: F, r: F) -> Result<()> {
    if !(s >= F::one() && t >= s && t.is_finite()) {
        return Err(Error::domain(
            what,
            format!("need t >= s >= 1, got t = {t}, s = {s}"),
        ));
    }
    if !(r >= F::zero() && r.is_finite()) {
        return Err(Error::domain(what, format!("radius must be >= 0, got {r}")));
    }
    Ok(())
}

/// `∫₀^{λ₀} g(λ) λ^q dλ`, substituting `λ = μ^{1/(q+1)}` when `q < 0`.
fn lambda_integral<F: Real>(
    what: &'static str,
    cfg: &AuxFnConfig<F>,
    g: impl Fn(F) -> F,
) -> Result<F> {
    let tol = AdaptiveTolerance {
        rel: F::lit(1e-11),
        ..AdaptiveTolerance::default()
    };
    let q = cfg.q;
    if q < F::zero() {
        let e = (q + F::one()).recip();
        let upper = cfg.lambda0.powf(q + F::one());
        let v = integrate_adaptive(what, F::zero(), upper, tol, |mu| g(mu.powf(e)))?;
        Ok(v * e)
    } else {
        integrate_adaptive(what, F::zero(), cfg.lambda0, tol, |l| g(l) * l.powf(q))
    }
}

fn phi_lambda_scaled<F: Real>(n: u32, x: F) -> F {
    yz_phi_scaled(n, x).unwrap_or(F::nan())
}

fn guarded<F: Real>(what: &'static str, v: F) -> Result<F> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Quadrature {
            what,
            estimate: f64::NAN,
        })
    }
}

/// `ξ_q(t, s, x; k) = ∫₀^{λ₀} e^{-λ(A_k(t)+R)} cosh(λ(φ_k(t) - φ_k(s))) φ_λ(x) λ^q dλ` at `|x| = r`.
pub fn xi_q<F: Real>(
    t: F,
    s: F,
    r: F,
    params: &SpacetimeParams<F>,
    cfg: &AuxFnConfig<F>,
) -> Result<F> {
    check("xi_q", t, s, r)?;
    cfg.validate()?;
    let delta = params.phi(t) - params.phi(s);
    let base = params.light_cone_a(s) + cfg.r_support;
    let n = params.n;
    // A_k(t) - A_k(s) = φ_k(t) - φ_k(s) folds the cosh into (1 + e^{-2λΔ})/2.
    let v = lambda_integral("xi_q", cfg, |l| {
        F::lit(0.5)
            * (F::one() + (-F::lit(2.0) * l * delta).exp())
            * (l * (r - base)).exp()
            * phi_lambda_scaled(n, l * r)
    })?;
    guarded("xi_q", v)
}

/// `η_q(t, s, x; k) = (st)^{k/2} ∫₀^{λ₀} e^{-λ(A_k(t)+R)} sinh(λΔ)/(λΔ) φ_λ(x) λ^q dλ`,
/// `Δ = φ_k(t) - φ_k(s)`, with `sinh(z)/z` continued by 1 at `z = 0`.
pub fn eta_q<F: Real>(
    t: F,
    s: F,
    r: F,
    params: &SpacetimeParams<F>,
    cfg: &AuxFnConfig<F>,
) -> Result<F> {
    check("eta_q", t, s, r)?;
    cfg.validate()?;
    let delta = params.phi(t) - params.phi(s);
    let base = params.light_cone_a(s) + cfg.r_support;
    let n = params.n;
    let v = lambda_integral("eta_q", cfg, |l| {
        let x = l * delta;
        let shape = if x == F::zero() {
            F::one()
        } else {
            -(-F::lit(2.0) * x).exp_m1() / (F::lit(2.0) * x)
        };
        shape * (l * (r - base)).exp() * phi_lambda_scaled(n, l * r)
    })?;
    guarded("eta_q", (s * t).powf(params.k * F::lit(0.5)) * v)
}

/// Fixed quadrature for `r ↦ ξ_q(t, t, r)` on a fixed radial grid, reusable
/// across many `t`.
///
/// The λ-range is split into dyadic panels `[λ₀ 2^{-j-1}, λ₀ 2^{-j}]` so that
/// the integrand, which concentrates at `λ ~ 1/(A_k(t) + R - r)`, stays resolved
/// for large `t`. The innermost panel uses the `q < 0` substitution.
#[derive(Debug, Clone)]
pub struct XiDiagonalTable<F> {
    lambdas: Vec<F>,
    weights: Vec<F>,
    radii: Vec<F>,
    /// `phi_scaled[j * lambdas.len() + i] = e^{-λ_i r_j} φ(λ_i r_j)`.
    phi_scaled: Vec<F>,
    r_support: F,
    params: SpacetimeParams<F>,
}

const DYADIC_PANELS: usize = 48;

impl<F: Real> XiDiagonalTable<F> {
    pub fn new(params: &SpacetimeParams<F>, cfg: &AuxFnConfig<F>, radii: &[F]) -> Result<Self> {
        cfg.validate()?;
        let rule = gauss_legendre(cfg.quadrature_nodes);
        let q = cfg.q;
        let mut lambdas = Vec::new();
        let mut weights = Vec::new();
        let mut hi = cfg.lambda0;
        for _ in 0..DYADIC_PANELS {
            let lo = hi * F::lit(0.5);
            let (half, mid) = ((hi - lo) * F::lit(0.5), (hi + lo) * F::lit(0.5));
            for &(x, w) in rule.iter() {
                let l = mid + half * F::lit(x);
                lambdas.push(l);
                weights.push(F::lit(w) * half * l.powf(q));
            }
            hi = lo;
        }
        // [0, hi] in μ = λ^{q+1}.
        let e = (q + F::one()).recip();
        let upper = hi.powf(q + F::one());
        let half = upper * F::lit(0.5);
        for &(x, w) in rule.iter() {
            let mu = half + half * F::lit(x);
            lambdas.push(mu.powf(e));
            weights.push(F::lit(w) * half * e);
        }
        let mut table = Self {
            lambdas,
            weights,
            radii: Vec::new(),
            phi_scaled: Vec::new(),
            r_support: cfg.r_support,
            params: *params,
        };
        table.extend(radii)?;
        Ok(table)
    }

    /// Appends radii to the grid.
    pub fn extend(&mut self, radii: &[F]) -> Result<()> {
        self.phi_scaled.reserve(self.lambdas.len() * radii.len());
        for &r in radii {
            for &l in &self.lambdas {
                self.phi_scaled.push(yz_phi_scaled(self.params.n, l * r)?);
            }
            self.radii.push(r);
        }
        Ok(())
    }

    pub fn radii(&self) -> &[F] {
        &self.radii
    }

    /// Writes `ξ_q(t, t, r_j)` for `j < out.len()` (a prefix of the radial grid).
    pub fn eval_into(&self, t: F, out: &mut [F]) {
        let base = self.params.light_cone_a(t) + self.r_support;
        let nl = self.lambdas.len();
        for (j, o) in out.iter_mut().enumerate() {
            *o = F::zero();
            let Some(&r) = self.radii.get(j) else {
                continue;
            };
            let col = &self.phi_scaled[j * nl..(j + 1) * nl];
            let mut acc = F::zero();
            for ((&l, &w), &ph) in self.lambdas.iter().zip(&self.weights).zip(col) {
                acc += w * (l * (r - base)).exp() * ph;
            }
            *o = acc;
        }
    }
}

/// Convenience wrapper returning a fresh vector from [`XiDiagonalTable::eval_into`].
pub fn xi_q_scaled_table<F: Real>(table: &XiDiagonalTable<F>, t: F) -> Vec<F> {
    let mut out = vec![F::zero(); table.radii().len()];
    table.eval_into(t, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_xi_value() {
        let p = SpacetimeParams::new(0.3, 1).unwrap();
        let cfg = AuxFnConfig::new(0.0, 1.0, 1.0).unwrap();
        let v = xi_q(1.0, 1.0, 0.0, &p, &cfg).unwrap();
        assert!((v - (1.0 - (-1f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn eta_equals_scaled_xi_on_diagonal() {
        let p = SpacetimeParams::new(0.6, 3).unwrap();
        let cfg = AuxFnConfig::new(0.4, 1.5, 1.0).unwrap();
        for &t in &[1.0f64, 2.5, 10.0] {
            let e = eta_q(t, t, 0.7, &p, &cfg).unwrap();
            let x = xi_q(t, t, 0.7, &p, &cfg).unwrap();
            assert!((e - t.powf(0.6) * x).abs() < 1e-12 * e);
        }
    }

    #[test]
    fn table_matches_adaptive() {
        let p = SpacetimeParams::new(2.0 / 3.0, 3).unwrap();
        for &q in &[-0.5, 0.5, 2.0] {
            let cfg = AuxFnConfig::new(q, 1.0, 1.0).unwrap();
            let radii: Vec<f64> = (0..40).map(|i| 0.25 * f64::from(i)).collect();
            let table = XiDiagonalTable::new(&p, &cfg, &radii).unwrap();
            for &t in &[1.0, 3.0, 50.0, 2000.0] {
                let vals = xi_q_scaled_table(&table, t);
                for (j, &r) in radii.iter().enumerate() {
                    if r > p.light_cone_a(t) + 1.0 {
                        break;
                    }
                    let exact = xi_q(t, t, r, &p, &cfg).unwrap();
                    assert!(
                        (vals[j] - exact).abs() < 1e-8 * exact,
                        "q={q} t={t} r={r}: {} vs {exact}",
                        vals[j]
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_q_at_or_below_minus_one() {
        assert!(AuxFnConfig::new(-1.0, 1.0, 1.0).is_err());
    }
}
