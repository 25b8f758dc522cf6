use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{AuxFnConfig, SpacetimeParams};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `(1 - (r/R)²)⁴` on `r < R`.
    Bump,
    /// `e^{-4 r²/R²} - e^{-4}` on `r < R`.
    TruncatedGaussian,
}

/// Nonnegative radial profile supported in the closed ball of radius `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataProfile<F> {
    pub kind: ProfileKind,
    pub radius: F,
}

impl<F: Real> DataProfile<F> {
    pub fn bump(radius: F) -> Self {
        Self {
            kind: ProfileKind::Bump,
            radius,
        }
    }

    pub fn value(&self, r: F) -> F {
        let x = r / self.radius;
        if x >= F::one() {
            return F::zero();
        }
        match self.kind {
            ProfileKind::Bump => (F::one() - x * x).powi(4),
            ProfileKind::TruncatedGaussian => (-F::lit(4.0) * x * x).exp() - (-F::lit(4.0)).exp(),
        }
    }
}

fn default_cfl<F: Real>() -> F {
    F::lit(0.5)
}
fn default_amplitude<F: Real>() -> F {
    F::lit(1e6)
}
fn default_one<F: Real>() -> F {
    F::one()
}
fn default_floor<F: Real>() -> F {
    F::lit(1e-12)
}
fn default_true() -> bool {
    true
}
fn default_every() -> usize {
    32
}

/// Everything a single run needs. Field names double as the JSON config schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "F: Real + Deserialize<'de>"))]
pub struct SimConfig<F> {
    pub params: SpacetimeParams<F>,
    pub p: F,
    pub eps: F,
    pub data_profile: DataProfile<F>,
    /// `u₁ = u1_factor · u₀`.
    #[serde(default = "default_one")]
    pub u1_factor: F,
    pub r_max: F,
    pub dr: F,
    #[serde(default = "default_cfl")]
    pub cfl: F,
    #[serde(default = "default_amplitude")]
    pub blowup_amplitude: F,
    pub t_max: F,
    /// Enables the weighted functional `𝒰`.
    #[serde(default)]
    pub aux: Option<AuxFnConfig<F>>,
    /// When false the source term is dropped (linear mode).
    #[serde(default = "default_true")]
    pub nonlinear: bool,
    /// Rerun at `dr/2` to confirm a threshold crossing.
    #[serde(default = "default_true")]
    pub refine: bool,
    /// `|u|` above this counts as inside the support.
    #[serde(default = "default_floor")]
    pub support_floor: F,
    /// Steps between diagnostic samples.
    #[serde(default = "default_every")]
    pub diagnostic_every: usize,
    /// `λ` of the kernel weak test; `None` skips it.
    #[serde(default)]
    pub kernel_test_lambda: Option<F>,
}

/// Extra cells beyond the light cone `R + A_k(t)` that are time-stepped.
pub const ACTIVE_MARGIN: usize = 160;

impl<F: Real> SimConfig<F> {
    /// Bump data of radius 1, `dr = 1/100`, and `r_max` just large enough for
    /// the cone up to `t_max`.
    pub fn new(params: SpacetimeParams<F>, p: F, eps: F, t_max: F) -> Result<Self> {
        let dr = F::lit(0.01);
        let radius = F::one();
        let c = Self {
            params,
            p,
            eps,
            data_profile: DataProfile::bump(radius),
            u1_factor: F::one(),
            r_max: Self::r_max_for(&params, radius, t_max, dr),
            dr,
            cfl: default_cfl(),
            blowup_amplitude: default_amplitude(),
            t_max,
            aux: None,
            nonlinear: true,
            refine: true,
            support_floor: default_floor(),
            diagnostic_every: default_every(),
            kernel_test_lambda: None,
        };
        c.validate()?;
        Ok(c)
    }

    /// `R + A_k(t_max)` plus the stepped margin and a few cells of slack.
    pub fn r_max_for(params: &SpacetimeParams<F>, radius: F, t_max: F, dr: F) -> F {
        radius + params.light_cone_a(t_max) + dr * F::from_usize_lossy(ACTIVE_MARGIN + 8)
    }

    /// Sets `dr` and grows `r_max` if the finer margin needs it.
    pub fn with_dr(mut self, dr: F) -> Self {
        self.dr = dr;
        self.r_max = self.r_max.max(Self::r_max_for(
            &self.params,
            self.data_profile.radius,
            self.t_max,
            dr,
        ));
        self
    }

    /// `𝒰` with `q = (n-1)/2 - 1/p`, `λ₀ = 1` and the data radius as `R`.
    pub fn with_frame_aux(mut self) -> Result<Self> {
        let q = (self.params.n_real() - F::one()) * F::lit(0.5) - self.p.recip();
        self.aux = Some(AuxFnConfig::new(q, F::one(), self.data_profile.radius)?);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.p > F::one() && self.p.is_finite()) {
            return bad(format!("p must exceed 1, got {}", self.p));
        }
        if !(self.eps >= F::zero() && self.eps.is_finite()) {
            return bad(format!("eps must be >= 0, got {}", self.eps));
        }
        if !(self.data_profile.radius > F::zero()) {
            return bad("data radius must be > 0".into());
        }
        if !(self.u1_factor >= F::zero()) {
            return bad("u1_factor must be >= 0 (nonnegative data)".into());
        }
        if !(self.dr > F::zero()) {
            return bad(format!("dr must be > 0, got {}", self.dr));
        }
        if !(self.cfl > F::zero() && self.cfl < F::one()) {
            return bad(format!("cfl must lie in (0, 1), got {}", self.cfl));
        }
        if !(self.blowup_amplitude > F::one()) {
            return bad("blowup_amplitude must exceed 1".into());
        }
        if !(self.t_max > F::one() && self.t_max.is_finite()) {
            return bad(format!("t_max must exceed 1, got {}", self.t_max));
        }
        let cone = self.data_profile.radius + self.params.light_cone_a(self.t_max);
        if !(self.r_max > cone) {
            return bad(format!(
                "r_max = {} must exceed R + A_k(t_max) = {cone}",
                self.r_max
            ));
        }
        if !(self.support_floor > F::zero()) {
            return bad("support_floor must be > 0".into());
        }
        if self.diagnostic_every == 0 {
            return bad("diagnostic_every must be >= 1".into());
        }
        if let Some(aux) = &self.aux {
            aux.validate()?;
        }
        if let Some(l) = self.kernel_test_lambda {
            if !(l > F::zero()) {
                return bad("kernel_test_lambda must be > 0".into());
            }
        }
        Ok(())
    }

    pub fn grid_len(&self) -> usize {
        (self.r_max / self.dr)
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX)
            .saturating_add(1)
    }
}
