//! Special functions: real-order modified Bessel functions, Kummer's
//! confluent hypergeometric function and the Yordanov-Zhang sphere integral.

mod bessel;
mod gamma;
mod kummer;
mod sphere;

pub use bessel::{
    bessel_i, bessel_i_asymptotic_scaled, bessel_i_scaled, bessel_i_scaled_any_order,
    bessel_i_series_scaled, bessel_ik_scaled, bessel_k, bessel_k_scaled, bessel_k_scaled_any_order,
    bessel_scaled_with_derivatives, i_asymptotic_switch, BesselOrder, ScaledBesselPair,
};
pub use gamma::{gamma, ln_gamma};
pub use kummer::kummer_m;
pub use sphere::{sphere_area, yz_phi, yz_phi_scaled};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Accuracy and guard settings shared by the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialEvalConfig<F> {
    /// Relative truncation target, in `(0, 1e-6]`.
    pub series_tolerance: F,
    /// Term budget for any single series, at least 50.
    pub max_terms: usize,
    /// Distance to the nearest integer below which an order is flagged.
    pub order_integer_guard: F,
}

impl<F: Real> Default for SpecialEvalConfig<F> {
    fn default() -> Self {
        Self {
            series_tolerance: F::epsilon().max(F::lit(1e-16)),
            max_terms: 1000,
            order_integer_guard: F::lit(1e-3),
        }
    }
}

impl<F: Real> SpecialEvalConfig<F> {
    pub fn new(series_tolerance: F, max_terms: usize, order_integer_guard: F) -> Result<Self> {
        let cfg = Self {
            series_tolerance,
            max_terms,
            order_integer_guard,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.series_tolerance > F::zero() && self.series_tolerance <= F::lit(1e-6)) {
            return Err(Error::InvalidConfig(format!(
                "series_tolerance must lie in (0, 1e-6], got {}",
                self.series_tolerance
            )));
        }
        if self.max_terms < 50 {
            return Err(Error::InvalidConfig(format!(
                "max_terms must be >= 50, got {}",
                self.max_terms
            )));
        }
        if !(self.order_integer_guard >= F::zero()) {
            return Err(Error::InvalidConfig(
                "order_integer_guard must be >= 0".into(),
            ));
        }
        Ok(())
    }
}
