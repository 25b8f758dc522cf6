use thiserror::Error;

/// Failure signals raised by the numerical routines.
///
/// Magnitudes are carried as `f64` regardless of the scalar type the failing
/// routine was instantiated with.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: result overflows (log magnitude {log_magnitude:.6e})")]
    Overflow {
        what: &'static str,
        log_magnitude: f64,
    },

    #[error("{what}: no convergence after {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("{what}: argument outside domain ({detail})")]
    Domain { what: &'static str, detail: String },

    #[error("quadrature for {what} did not converge (estimated error {estimate:.3e})")]
    Quadrature { what: &'static str, estimate: f64 },

    #[error("rational sequence truncated at j = {j_reached}: magnitude exceeds {max_bits} bits")]
    RationalTruncation { j_reached: usize, max_bits: u64 },

    #[error("series too short: {samples} samples before blow-up, need at least {required}")]
    SeriesTooShort { samples: usize, required: usize },

    #[error("support reached the outer boundary at t = {t:.6e} (radius {radius:.6e}, r_max {r_max:.6e})")]
    ConeViolation { t: f64, radius: f64, r_max: f64 },

    #[error("linear dry run is unstable: energy grew by a factor {growth:.3e}")]
    Instability { growth: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
