//! Numerical toolkit for the semilinear wave equation
//! `u_tt - t^{-2k} Δu = t^{1-p} |u|^p` on a generalized Einstein-de Sitter
//! background.
//!
//! The crate is generic over the scalar type through [`Real`]; the `*64`
//! aliases at the root fix the common `f64` instantiation.

pub mod checks;
pub mod error;
pub mod exponents;
pub mod iteration;
pub mod kernels;
pub mod pde_sim;
pub mod quadrature;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SpecialEvalConfig64 = special::SpecialEvalConfig<f64>;
pub type BesselOrder64 = special::BesselOrder<f64>;
pub type SpacetimeParams64 = kernels::SpacetimeParams<f64>;
pub type AuxFnConfig64 = kernels::AuxFnConfig<f64>;
pub type KernelContext64 = kernels::KernelContext<f64>;
pub type ExponentReport64 = exponents::ExponentReport<f64>;
pub type KatoInput64 = iteration::KatoInput<f64>;
pub type IterationTrace64 = iteration::IterationTrace<f64>;
pub type FittedConstants64 = iteration::FittedConstants<f64>;
pub type SimConfig64 = pde_sim::SimConfig<f64>;
pub type SimResult64 = pde_sim::SimResult<f64>;
