//! Geometry of the background (`φ_k`, `A_k`), the kernel pair `y₀`/`y₁` of
//! `y'' = λ² t^{-2k} y`, and the auxiliary test functions `ξ_q`, `η_q`.

mod auxfn;
mod bounds;
mod ode;

pub use auxfn::{eta_q, xi_q, xi_q_scaled_table, AuxFnConfig, XiDiagonalTable};
pub use bounds::{
    check_min_principle, fit_b0_b1, fit_b2, kernel_grid_rows, representation_disagreement,
    BoundGrid, FittedConstant, KernelCsvRow, MinPrincipleReport,
};
pub use ode::{
    hypergeometric_v_tilde, hypergeometric_v_tilde_kummer, hypergeometric_wronskian,
    kernel_pair_2_3_hypergeometric, kernel_value, kernel_y0, kernel_y0_elementary_2_3, kernel_y1,
    kernel_y1_elementary_2_3, second_derivative_fd, Kernel, KernelContext, KernelEval, KernelFault,
    Representation,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::BesselOrder;

/// The metric exponent `k ∈ [0, 1)` and spatial dimension `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeParams<F> {
    pub k: F,
    pub n: u32,
}

impl<F: Real> SpacetimeParams<F> {
    pub fn new(k: F, n: u32) -> Result<Self> {
        let p = Self { k, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k >= F::zero() && self.k < F::one()) {
            return Err(Error::InvalidConfig(format!(
                "k must lie in [0, 1), got {}",
                self.k
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be >= 1".into()));
        }
        Ok(())
    }

    /// `ν = 1 / (2(1 - k))`.
    pub fn nu(&self) -> F {
        F::one() / (F::lit(2.0) * (F::one() - self.k))
    }

    pub fn order(&self) -> BesselOrder<F> {
        BesselOrder::new(self.nu()).expect("nu >= 1/2 for k in [0, 1)")
    }

    /// `c_k = (1 - k)^{k/(1-k)}`.
    pub fn c_k(&self) -> F {
        let one_k = F::one() - self.k;
        one_k.powf(self.k / one_k)
    }

    /// `γ_k = 1/3` for `k <= 2/3`, else `1 - k`.
    pub fn gamma_k(&self) -> F {
        if self.k <= F::lit(2.0) / F::lit(3.0) {
            F::one() / F::lit(3.0)
        } else {
            F::one() - self.k
        }
    }

    pub fn n_real(&self) -> F {
        F::from_u32(self.n).expect("dimension fits")
    }

    /// `φ_k(t) = t^{1-k} / (1 - k)`.
    pub fn phi(&self, t: F) -> F {
        let one_k = F::one() - self.k;
        t.powf(one_k) / one_k
    }

    /// `φ_k'(t) = t^{-k}`.
    pub fn phi_prime(&self, t: F) -> F {
        t.powf(-self.k)
    }

    /// Light-cone amplitude `A_k(t) = φ_k(t) - φ_k(1)`.
    pub fn light_cone_a(&self, t: F) -> F {
        self.phi(t) - self.phi(F::one())
    }

    /// True when `k` is `2/3` to within rounding of the literal.
    pub fn is_two_thirds(&self) -> bool {
        (self.k - F::lit(2.0) / F::lit(3.0)).abs() <= F::lit(1e-12).max(F::epsilon() * F::lit(4.0))
    }
}

/// `φ_k(t)` as a free function.
pub fn phi_k<F: Real>(t: F, params: &SpacetimeParams<F>) -> F {
    params.phi(t)
}

/// `A_k(t)` as a free function.
pub fn light_cone_a<F: Real>(t: F, params: &SpacetimeParams<F>) -> Result<F> {
    if !(t >= F::one()) {
        return Err(Error::domain(
            "light_cone_A",
            format!("t must be >= 1, got {t}"),
        ));
    }
    Ok(params.light_cone_a(t))
}

/// `⟨y⟩ = 3 + |y|`.
#[inline]
pub fn angle_bracket<F: Real>(y: F) -> F {
    F::lit(3.0) + y.abs()
}
