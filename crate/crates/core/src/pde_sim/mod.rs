//! Radially symmetric simulation of `u_tt - t^{-2k} Δu = t^{1-p}|u|^p` from
//! data at `t = 1`: velocity-Verlet (kick-drift-kick leapfrog) in time,
//! central differences in `r`, with blow-up detection, the functionals `U`
//! and `𝒰`, weak-form residuals and ε-sweep fitting.

mod config;
mod fit;
mod solver;

pub use config::{DataProfile, ProfileKind, SimConfig, ACTIVE_MARGIN};
pub use fit::*;
pub use solver::{
    functional_curly_u, functional_u, radial_weights, run, weak_residual, Diagnostic,
    KernelWeakData, SimResult, ThresholdCrossing, WeakSnapshot, WeakTest, DRY_RUN_STEPS,
    ENERGY_GROWTH_LIMIT, NONLINEAR_STEP_FACTOR, REFINEMENT_TOLERANCE, REPORTED_THRESHOLDS,
    WEAK_CHECK_GROWTH,
};
