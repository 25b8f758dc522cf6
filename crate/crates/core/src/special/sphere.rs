use std::sync::Arc;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::Real;

/// Surface measure of the unit sphere `S^m ⊂ R^{m+1}`: `2π^{(m+1)/2} / Γ((m+1)/2)`.
pub fn sphere_area<F: Real>(m: u32) -> F {
    let h = F::lit(f64::from(m) + 1.0) * F::lit(0.5);
    F::lit(2.0) * (h * F::PI().ln() - ln_gamma(h)).exp()
}

const START_NODES: usize = 64;
const MAX_NODES: usize = 4096;

fn polar_integral_scaled<F: Real>(n: u32, r: F) -> Result<F> {
    // e^{-r} ∫_0^π e^{r cos θ} sin^{n-2} θ dθ, refined by node doubling.
    let power = i32::try_from(n - 2).unwrap_or(i32::MAX);
    let eval = |rule: Arc<Vec<(f64, f64)>>| -> F {
        let half = F::FRAC_PI_2();
        let mut acc = F::zero();
        for &(x, w) in rule.iter() {
            let theta = half + half * F::lit(x);
            acc += F::lit(w) * (r * (theta.cos() - F::one())).exp() * theta.sin().powi(power);
        }
        acc * half
    };
    let mut nodes = START_NODES;
    let mut prev = eval(gauss_legendre(nodes));
    while nodes < MAX_NODES {
        nodes *= 2;
        let next = eval(gauss_legendre(nodes));
        if (next - prev).abs() <= F::lit(1e-10) * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature {
        what: "yz_phi",
        estimate: prev.to_f64_lossy(),
    })
}

/// `e^{-r} φ(r)`, where `φ(x) = ∫_{S^{n-1}} e^{x·ω} dσ_ω` for `n >= 2` and
/// `φ(x) = cosh x` for `n = 1`.
pub fn yz_phi_scaled<F: Real>(n: u32, r: F) -> Result<F> {
    if n == 0 {
        return Err(Error::domain("yz_phi", "dimension must be >= 1"));
    }
    if !(r.is_finite()) {
        return Err(Error::domain(
            "yz_phi",
            format!("radius must be finite, got {r}"),
        ));
    }
    let r = r.abs();
    if n == 1 {
        return Ok(F::lit(0.5) * (F::one() + (-F::lit(2.0) * r).exp()));
    }
    if n == 3 {
        // 4π sinh(r)/r
        let two_pi = F::lit(2.0) * F::PI();
        return Ok(if r < F::lit(1e-8) {
            F::lit(2.0) * two_pi * (F::one() - r)
        } else {
            two_pi * -(-F::lit(2.0) * r).exp_m1() / r
        });
    }
    Ok(sphere_area::<F>(n - 2) * polar_integral_scaled(n, r)?)
}

/// The Yordanov-Zhang function `φ` at radius `r`; positive with `Δφ = φ`.
pub fn yz_phi<F: Real>(n: u32, r: F) -> Result<F> {
    let scaled = yz_phi_scaled(n, r)?;
    let r = r.abs();
    let log_mag = scaled.ln() + r;
    if log_mag >= F::max_exp_arg() {
        return Err(Error::Overflow {
            what: "yz_phi",
            log_magnitude: log_mag.to_f64_lossy(),
        });
    }
    Ok(scaled * r.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area::<f64>(0) - 2.0).abs() < 1e-14);
        assert!((sphere_area::<f64>(1) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area::<f64>(2) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area::<f64>(3) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn three_dim_shortcut_matches_polar_integral() {
        for r in [0.0f64, 1e-9, 0.3, 1.0, 7.0, 60.0] {
            let quad = sphere_area::<f64>(1) * polar_integral_scaled(3, r).unwrap();
            let fast = yz_phi_scaled(3, r).unwrap();
            assert!((quad - fast).abs() < 1e-10 * fast, "r={r}");
        }
    }

    #[test]
    fn reference_points() {
        assert!((yz_phi(2, 0.0f64).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((yz_phi(3, 1.0f64).unwrap() - 4.0 * PI * 1f64.sinh()).abs() < 1e-11);
        assert!((yz_phi(1, 2.0f64).unwrap() - 2f64.cosh()).abs() < 1e-14);
        assert!((yz_phi(3, 1.0f64).unwrap() - 14.768_02).abs() < 1e-5);
    }

    #[test]
    fn large_radius_overflow_and_scaled() {
        assert!(matches!(yz_phi(3, 800.0f64), Err(Error::Overflow { .. })));
        let s = yz_phi_scaled(3, 800.0f64).unwrap();
        assert!((s - 4.0 * PI * 0.5 * (1.0 - (-1600f64).exp()) / 800.0).abs() < 1e-12 * s);
    }
}
