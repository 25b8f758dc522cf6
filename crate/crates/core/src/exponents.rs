//! Critical exponents, dimension thresholds and the lifespan-law selector.
//!
//! The dimension `n` is real-valued throughout so that boundary cases such as
//! `n = N(k)` can be probed exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerance used to decide `p = p₀` or `p = p₁`, and `n = N(k)`.
pub const CRITICAL_TOL: f64 = 1e-9;

/// Positive root of `a p² + b p + c = 0` with `a > 0 > c`, by the cancellation-free formula.
pub fn positive_root<F: Real>(a: F, b: F, c: F) -> F {
    let disc = (b * b - F::lit(4.0) * a * c).sqrt();
    let q = -F::lit(0.5) * (b + b.signum() * disc);
    let (r1, r2) = (q / a, c / q);
    r1.max(r2)
}

fn check_nk<F: Real>(n: F, k: F) -> Result<()> {
    if !(n >= F::one() && n.is_finite()) {
        return Err(Error::domain(
            "exponents",
            format!("n must be >= 1, got {n}"),
        ));
    }
    if !(k >= F::zero() && k < F::one()) {
        return Err(Error::domain(
            "exponents",
            format!("k must lie in [0, 1), got {k}"),
        ));
    }
    Ok(())
}

/// Strauss exponent: positive root of `(n-1)p² - (n+1)p - 2 = 0`; `+∞` for `n = 1`.
pub fn p_strauss<F: Real>(n: F) -> F {
    if n <= F::one() {
        return F::infinity();
    }
    positive_root(n - F::one(), -(n + F::one()), -F::lit(2.0))
}

/// `p₀(n, k)`: positive root of `((1-k)n+1)p² - ((1-k)n+3+2k)p - 2(1-k) = 0`.
pub fn critical_exponent_p0<F: Real>(n: F, k: F) -> Result<F> {
    check_nk(n, k)?;
    let m = (F::one() - k) * n;
    Ok(positive_root(
        m + F::one(),
        -(m + F::lit(3.0) + F::lit(2.0) * k),
        -F::lit(2.0) * (F::one() - k),
    ))
}

/// Coefficients `(α, β)` of the second form `α p² - β p - 1 = 0` of the `p₀` equation.
pub fn p0_second_form_coefficients<F: Real>(n: F, k: F) -> (F, F) {
    let two_one_k = F::lit(2.0) * (F::one() - k);
    let alpha = (n - F::one()) * F::lit(0.5) + (F::lit(2.0) - k) / two_one_k;
    let beta = (n + F::one()) * F::lit(0.5) + (F::lit(2.0) + F::lit(3.0) * k) / two_one_k;
    (alpha, beta)
}

/// `p₀(n, k)` from the second form of its quadratic.
pub fn critical_exponent_p0_second_form<F: Real>(n: F, k: F) -> Result<F> {
    check_nk(n, k)?;
    let (alpha, beta) = p0_second_form_coefficients(n, k);
    Ok(positive_root(alpha, -beta, -F::one()))
}

/// `-α p + ((n-1)/2 + (2+k)/(2(1-k))) + 1/p`, equal to `-1/(1-k)` at `p = p₀`.
pub fn p0_identity_lhs<F: Real>(n: F, k: F, p: F) -> F {
    let (alpha, _) = p0_second_form_coefficients(n, k);
    let gamma = (n - F::one()) * F::lit(0.5) + (F::lit(2.0) + k) / (F::lit(2.0) * (F::one() - k));
    -alpha * p + gamma + p.recip()
}

/// `p₁(n, k) = 1 + 2/((1-k)n)`.
pub fn p1<F: Real>(n: F, k: F) -> F {
    F::one() + F::lit(2.0) / ((F::one() - k) * n)
}

/// `p₂(n, k) = 2 + 2k/((1-k)n + 1)`.
pub fn p2<F: Real>(n: F, k: F) -> F {
    F::lit(2.0) + F::lit(2.0) * k / ((F::one() - k) * n + F::one())
}

/// `p₃(n, k) = 2(1-k)/((1-k)n - 1)`; `+∞` when `(1-k)n <= 1`, where `a₁ >= a₂` holds for all `p`.
pub fn p3<F: Real>(n: F, k: F) -> F {
    let d = (F::one() - k) * n - F::one();
    if d <= F::zero() {
        F::infinity()
    } else {
        F::lit(2.0) * (F::one() - k) / d
    }
}

/// The dimension thresholds `N(k)`, `Ñ(k) = 1/(1-k)` and `N̂(k) = 2 + 1/(1-k)`.
///
/// `n_k` is the dimension at which `p₀ = p₁`, namely
/// `(1 - 2k + √(4k² - 4k + 9)) / (2(1-k))`. The frequently quoted variant
/// with `4k² - 4k + 8` under the root does not satisfy `p₀ = p₁` (at `k = 0`
/// it gives `1.914…` while `p₀(2, 0) = p₁(2, 0) = 2`); it is kept as
/// `n_k_variant` for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionThresholds<F> {
    pub n_k: F,
    pub n_k_variant: F,
    pub n_tilde: F,
    pub n_hat: F,
}

pub fn thresholds<F: Real>(k: F) -> Result<DimensionThresholds<F>> {
    check_nk(F::one(), k)?;
    let one_k = F::one() - k;
    let root = |c: f64| (F::lit(4.0) * k * k - F::lit(4.0) * k + F::lit(c)).sqrt();
    let n_of = |r: F| (F::one() - F::lit(2.0) * k + r) / (F::lit(2.0) * one_k);
    Ok(DimensionThresholds {
        n_k: n_of(root(9.0)),
        n_k_variant: n_of(root(8.0)),
        n_tilde: one_k.recip(),
        n_hat: F::lit(2.0) + one_k.recip(),
    })
}

/// The quantities entering Kato's lemma for the functional `U`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KatoQuantities<F> {
    pub a1: F,
    pub a2: F,
    pub m1: F,
    pub m2: F,
    pub theta: F,
    /// `q = ((1-k)n + 1)(p - 1)`, the decay power in `U'' >= B (R+t)^{-q} |U|^p`.
    pub q: F,
}

/// `θ(p, n, k) = 1-k + [(1-k)(n+1)/2 + 1 + 3k/2] p - [(1-k)(n-1)/2 + 1 - k/2] p²`.
pub fn theta<F: Real>(n: F, k: F, p: F) -> F {
    let one_k = F::one() - k;
    let half = F::lit(0.5);
    one_k + (one_k * (n + F::one()) * half + F::one() + F::lit(1.5) * k) * p
        - (one_k * (n - F::one()) * half + F::one() - k * half) * p * p
}

pub fn kato_quantities<F: Real>(n: F, k: F, p: F) -> Result<KatoQuantities<F>> {
    check_nk(n, k)?;
    if !(p > F::one()) {
        return Err(Error::domain(
            "kato_quantities",
            format!("p must exceed 1, got {p}"),
        ));
    }
    let one_k = F::one() - k;
    let half = F::lit(0.5);
    let q = (one_k * n + F::one()) * (p - F::one());
    let a1 = -q + p + F::lit(2.0);
    let a2 = one_k * (n - F::one()) * (F::one() - p * half) + k * p * half + F::lit(3.0) - p;
    let m1 = p * half * (-one_k * n * (p - F::one()) + F::lit(2.0));
    let th = theta(n, k, p);
    Ok(KatoQuantities {
        a1,
        a2,
        m1,
        m2: th * half,
        theta: th,
        q,
    })
}

/// Which of the five dimension ranges `n` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionCase {
    /// `n <= Ñ(k)`
    AtMostNTilde,
    /// `Ñ(k) < n < N(k)`
    BetweenNTildeAndN,
    /// `n = N(k)`
    EqualN,
    /// `N(k) < n < N̂(k)`
    BetweenNAndNHat,
    /// `n >= N̂(k)`
    AtLeastNHat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SubP1,
    SubP0ViaP3Left,
    SubP0ViaP3Right,
    SubP0,
    CritP0,
    CritP1,
    SupercriticalUnknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    /// `T ≲ ε^{-exponent}`
    Power,
    /// `T <= exp(C ε^{-exponent})`
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifespanLaw<F> {
    pub kind: LawKind,
    pub exponent: F,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification<F> {
    pub regime: Regime,
    pub dimension_case: DimensionCase,
    /// `None` when the regime is `SupercriticalUnknown`.
    pub law: Option<LifespanLaw<F>>,
}

pub fn dimension_case<F: Real>(n: F, k: F) -> Result<DimensionCase> {
    let th = thresholds(k)?;
    let tol = F::lit(CRITICAL_TOL);
    Ok(if (n - th.n_k).abs() <= tol * th.n_k {
        DimensionCase::EqualN
    } else if n <= th.n_tilde {
        DimensionCase::AtMostNTilde
    } else if n < th.n_k {
        DimensionCase::BetweenNTildeAndN
    } else if n < th.n_hat {
        DimensionCase::BetweenNAndNHat
    } else {
        DimensionCase::AtLeastNHat
    })
}

/// Selects the lifespan upper bound for `(n, k, p)`.
pub fn classify_lifespan<F: Real>(n: F, k: F, p: F) -> Result<Classification<F>> {
    check_nk(n, k)?;
    if !(p > F::one()) {
        return Err(Error::domain(
            "classify_lifespan",
            format!("p must exceed 1, got {p}"),
        ));
    }
    let case = dimension_case(n, k)?;
    let tol = F::lit(CRITICAL_TOL);
    let p0 = critical_exponent_p0(n, k)?;
    let p1v = p1(n, k);
    let p3v = p3(n, k);
    let power_a1 = || LifespanLaw {
        kind: LawKind::Power,
        exponent: (F::lit(2.0) / (p - F::one()) - (F::one() - k) * n).recip(),
    };
    let power_theta = || LifespanLaw {
        kind: LawKind::Power,
        exponent: p * (p - F::one()) / theta(n, k, p),
    };
    let at = |crit: F| (p - crit).abs() <= tol * crit;
    let (regime, law) = match case {
        DimensionCase::AtMostNTilde | DimensionCase::BetweenNTildeAndN | DimensionCase::EqualN => {
            if at(p1v) {
                (
                    Regime::CritP1,
                    Some(LifespanLaw {
                        kind: LawKind::Exponential,
                        exponent: p - F::one(),
                    }),
                )
            } else if p < p1v {
                (Regime::SubP1, Some(power_a1()))
            } else {
                (Regime::SupercriticalUnknown, None)
            }
        }
        DimensionCase::BetweenNAndNHat | DimensionCase::AtLeastNHat => {
            if at(p0) {
                (
                    Regime::CritP0,
                    Some(LifespanLaw {
                        kind: LawKind::Exponential,
                        exponent: p * (p - F::one()),
                    }),
                )
            } else if p >= p0 {
                (Regime::SupercriticalUnknown, None)
            } else if case == DimensionCase::AtLeastNHat {
                (Regime::SubP0, Some(power_theta()))
            } else if p <= p3v {
                (Regime::SubP0ViaP3Left, Some(power_a1()))
            } else {
                (Regime::SubP0ViaP3Right, Some(power_theta()))
            }
        }
    };
    Ok(Classification {
        regime,
        dimension_case: case,
        law,
    })
}

/// Every exponent and threshold for `(n, k)`, plus the Kato data and
/// classification when `p` is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport<F> {
    pub n: F,
    pub k: F,
    pub p_strauss: F,
    pub p0: F,
    pub p0_second_form: F,
    pub p1: F,
    pub p2: F,
    pub p3: F,
    pub thresholds: DimensionThresholds<F>,
    pub dimension_case: DimensionCase,
    pub p: Option<F>,
    pub kato: Option<KatoQuantities<F>>,
    pub classification: Option<Classification<F>>,
}

pub fn exponent_report<F: Real>(n: F, k: F, p: Option<F>) -> Result<ExponentReport<F>> {
    check_nk(n, k)?;
    let (kato, classification) = match p {
        Some(p) => (
            Some(kato_quantities(n, k, p)?),
            Some(classify_lifespan(n, k, p)?),
        ),
        None => (None, None),
    };
    Ok(ExponentReport {
        n,
        k,
        p_strauss: p_strauss(n),
        p0: critical_exponent_p0(n, k)?,
        p0_second_form: critical_exponent_p0_second_form(n, k)?,
        p1: p1(n, k),
        p2: p2(n, k),
        p3: p3(n, k),
        thresholds: thresholds(k)?,
        dimension_case: dimension_case(n, k)?,
        p,
        kato,
        classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p0_reference_values() {
        let k = 2.0f64 / 3.0;
        assert!((critical_exponent_p0(3.0, k).unwrap() - (8.0 + 76f64.sqrt()) / 6.0).abs() < 1e-14);
        assert!(
            (critical_exponent_p0(4.0, k).unwrap() - (17.0 + 345f64.sqrt()) / 14.0).abs() < 1e-14
        );
    }

    #[test]
    fn threshold_values() {
        let t = thresholds(2.0f64 / 3.0).unwrap();
        assert!(
            (t.n_k_variant - 3.5).abs() < 1e-14
                && (t.n_tilde - 3.0).abs() < 1e-14
                && (t.n_hat - 5.0).abs() < 1e-14
        );
        assert!((t.n_k - (73f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);
        let t = thresholds(0.0f64).unwrap();
        assert!((t.n_k_variant - (1.0 + 8f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((t.n_k - 2.0).abs() < 1e-15);
        assert_eq!((t.n_tilde, t.n_hat), (1.0, 3.0));
    }

    #[test]
    fn kato_reference_values() {
        let q = kato_quantities(3.0f64, 2.0 / 3.0, 2.0).unwrap();
        assert!((q.m1 - 1.0).abs() < 1e-14);
        assert!((q.theta - 5.0 / 3.0).abs() < 1e-14);
        assert!((q.m2 - 5.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn classification_examples() {
        let k = 2.0f64 / 3.0;
        let c = classify_lifespan(3.0, k, 2.0).unwrap();
        assert_eq!(c.regime, Regime::SubP1);
        assert!((c.law.unwrap().exponent - 1.0).abs() < 1e-13);
        let c = classify_lifespan(3.0, k, p1(3.0, k)).unwrap();
        assert_eq!(c.regime, Regime::CritP1);
        assert_eq!(c.law.unwrap().kind, LawKind::Exponential);
        assert!((c.law.unwrap().exponent - 2.0).abs() < 1e-12);
        let p0 = critical_exponent_p0(4.0, k).unwrap();
        let c = classify_lifespan(4.0, k, p0).unwrap();
        assert_eq!(c.regime, Regime::CritP0);
        assert!((c.law.unwrap().exponent - p0 * (p0 - 1.0)).abs() < 1e-12);
        assert_eq!(
            classify_lifespan(3.0, k, 3.5).unwrap().regime,
            Regime::SupercriticalUnknown
        );
        assert_eq!(
            classify_lifespan(6.0, k, 1.5).unwrap().regime,
            Regime::SubP0
        );
    }

    #[test]
    fn degenerate_p3_interval() {
        // n = 2, k = 0: p₃ = p₀ = p₁ = 2, which is exactly n = N(0).
        assert!((p3(2.0f64, 0.0) - 2.0).abs() < 1e-15);
        assert!((critical_exponent_p0(2.0f64, 0.0).unwrap() - 2.0).abs() < 1e-14);
        let c = classify_lifespan(2.0f64, 0.0, 1.9).unwrap();
        assert_eq!(c.dimension_case, DimensionCase::EqualN);
        assert_eq!(c.regime, Regime::SubP1);
        assert!((c.law.unwrap().exponent - 1.0 / (2.0 / 0.9 - 2.0)).abs() < 1e-12);
        // Just above N(0) the (p₃, p₀) interval is nonempty but short.
        assert_eq!(
            classify_lifespan(2.1f64, 0.0, 1.5).unwrap().regime,
            Regime::SubP0ViaP3Left
        );
        assert_eq!(
            classify_lifespan(2.1f64, 0.0, 1.9).unwrap().regime,
            Regime::SubP0ViaP3Right
        );
        assert_eq!(p3(1.0, 0.0), f64::INFINITY);
    }

    #[test]
    fn strauss() {
        assert!((p_strauss(3.0) - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(p_strauss(1.0), f64::INFINITY);
    }
}
