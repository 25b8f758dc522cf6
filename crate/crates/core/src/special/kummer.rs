use super::SpecialEvalConfig;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Kummer's function `M(a, c, z) = Σ_h (a)_h / ((c)_h h!) z^h`.
///
/// For `z < 0` the series is summed after Kummer's transformation
/// `M(a, c, z) = e^z M(c - a, c, -z)`, which turns an alternating sum into a
/// positive one whenever `c > a`.
pub fn kummer_m<F: Real>(a: F, c: F, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    if c <= F::zero() && c == c.round() {
        return Err(Error::domain(
            "kummer_m",
            format!("c must not be a nonpositive integer, got {c}"),
        ));
    }
    if z < F::zero() {
        let inner = kummer_series(c - a, c, -z, cfg)?;
        return Ok(z.exp() * inner);
    }
    kummer_series(a, c, z, cfg)
}

fn kummer_series<F: Real>(a: F, c: F, z: F, cfg: &SpecialEvalConfig<F>) -> Result<F> {
    let mut term = F::one();
    let mut sum = F::one();
    let mut small_run = 0;
    for h in 0..cfg.max_terms {
        let hf = F::from_usize_lossy(h);
        term = term * (a + hf) / ((c + hf) * (hf + F::one())) * z;
        sum += term;
        if term == F::zero() {
            // Terminating series (a a nonpositive integer) or z = 0.
            return Ok(sum);
        }
        if term.abs() < cfg.series_tolerance * sum.abs() {
            small_run += 1;
            if small_run == 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "kummer_m",
        terms: cfg.max_terms,
    })
}
