//! Slicing iterations for the two critical cases, the lifespan thresholds
//! they produce, Kato's lemma, and numerical checks of the iteration frames.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Num, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{angle_bracket, FittedConstant, SpacetimeParams};
use crate::pde_sim::SimResult;
use crate::quadrature::{cumulative_trapezoid, trapezoid};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationCase {
    /// `p = p₀(n, k)`, iterating the weighted functional `𝒰`.
    CritP0,
    /// `p = p₁(n, k)`, iterating the spatial integral `U`.
    CritP1,
}

fn pow_generic<T: Num + Clone>(base: &T, e: usize) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

/// `x₀ = 1`, `x_{j+1} = 1 + p x_j` (the `α_j` and `σ_j` recursion), for `j <= j_max`.
pub fn alpha_recursion<T: Num + Clone>(p: &T, j_max: usize) -> Vec<T> {
    let mut out = vec![T::one()];
    for j in 0..j_max {
        out.push(T::one() + p.clone() * out[j].clone());
    }
    out
}

/// `β₀ = 0`, `β_{j+1} = p - 1 + p β_j`, for `j <= j_max`.
pub fn beta_recursion<T: Num + Clone>(p: &T, j_max: usize) -> Vec<T> {
    let mut out = vec![T::zero()];
    for j in 0..j_max {
        out.push(p.clone() - T::one() + p.clone() * out[j].clone());
    }
    out
}

/// `(p^{j+1} - 1)/(p - 1)`.
pub fn alpha_closed<T: Num + Clone>(p: &T, j: usize) -> T {
    (pow_generic(p, j + 1) - T::one()) / (p.clone() - T::one())
}

/// `p^j - 1`.
pub fn beta_closed<T: Num + Clone>(p: &T, j: usize) -> T {
    pow_generic(p, j) - T::one()
}

/// `Σ_{i=0}^{j-1} (j - i) p^i` by direct summation.
pub fn weighted_power_sum<T: Num + Clone>(p: &T, j: usize) -> T {
    let mut acc = T::zero();
    let mut pw = T::one();
    for i in 0..j {
        let w = (0..j - i).fold(T::zero(), |a, _| a + T::one());
        acc = acc + w * pw.clone();
        pw = pw * p.clone();
    }
    acc
}

/// `((p^{j+1} - p)/(p - 1) - j) / (p - 1)`.
pub fn weighted_power_sum_closed<T: Num + Clone>(p: &T, j: usize) -> T {
    let pm1 = p.clone() - T::one();
    let jj = (0..j).fold(T::zero(), |a, _| a + T::one());
    ((pow_generic(p, j + 1) - p.clone()) / pm1.clone() - jj) / pm1
}

/// `ℓ_j = 2 - 2^{-(j+1)}`, exactly.
pub fn ell<T: Num + Clone>(j: usize) -> T {
    let two = T::one() + T::one();
    two.clone() - T::one() / pow_generic(&two, j + 1)
}

/// Exact exponent sequences of a slicing iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSequences {
    pub case: IterationCase,
    pub p: BigRational,
    pub ell: Vec<BigRational>,
    /// `α_j` (critical `p₀`) or `σ_j` (critical `p₁`).
    pub alpha: Vec<BigRational>,
    /// `β_j`; empty in the `p₁` case.
    pub beta: Vec<BigRational>,
    /// Recursion and closed form agreed exactly at every `j`.
    pub closed_form_agrees: bool,
}

/// Bit budget for numerators and denominators in [`slicing_sequences`].
pub const RATIONAL_MAX_BITS: u64 = 1 << 16;

fn too_big(x: &BigRational, max_bits: u64) -> bool {
    x.numer().bits() > max_bits || x.denom().bits() > max_bits
}

/// Exponent sequences by recursion in exact rational arithmetic, checked
/// against the closed forms.
pub fn slicing_sequences(
    case: IterationCase,
    p: &BigRational,
    j_max: usize,
) -> Result<RationalSequences> {
    if *p <= BigRational::one() {
        return Err(Error::domain(
            "slicing_sequences",
            format!("p must exceed 1, got {p}"),
        ));
    }
    if j_max > 60 {
        return Err(Error::domain(
            "slicing_sequences",
            format!("j_max must be <= 60, got {j_max}"),
        ));
    }
    let alpha = alpha_recursion(p, j_max);
    let beta = match case {
        IterationCase::CritP0 => beta_recursion(p, j_max),
        IterationCase::CritP1 => Vec::new(),
    };
    for (j, a) in alpha.iter().enumerate() {
        if too_big(a, RATIONAL_MAX_BITS) {
            return Err(Error::RationalTruncation {
                j_reached: j,
                max_bits: RATIONAL_MAX_BITS,
            });
        }
    }
    let mut agrees = alpha
        .iter()
        .enumerate()
        .all(|(j, a)| *a == alpha_closed(p, j));
    agrees &= beta
        .iter()
        .enumerate()
        .all(|(j, b)| *b == beta_closed(p, j));
    Ok(RationalSequences {
        case,
        p: p.clone(),
        ell: (0..=j_max).map(ell).collect(),
        alpha,
        beta,
        closed_form_agrees: agrees,
    })
}

/// Converts a decimal/fraction string such as `"5/2"` or `"2.5"` to an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad rational {s:?}")))?;
        let b: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad rational {s:?}")))?;
        if b.is_zero() {
            return Err(Error::InvalidConfig(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let num: BigInt = digits
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad rational {s:?}")))?;
    let den = num::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(num, den))
}

/// `ℓ_j`, exponent sequences as decimal strings (exact), and the
/// floating-point constant sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace<F> {
    pub case: IterationCase,
    pub p: F,
    pub j_max: usize,
    pub ell: Vec<F>,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    /// `log C_j` (critical `p₀`) or `log K_j` (critical `p₁`).
    pub log_constant: Vec<F>,
    /// `j₀` or `j₁`.
    pub j_star: u64,
    /// `E` or `N`, in log form to survive extreme magnitudes.
    pub log_amplitude_constant: F,
    pub closed_form_agrees: bool,
}

/// Constants of the first critical case: the frame constant `C`, `γ_k` and
/// the first-logarithmic-bound constant `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CritP0Constants<F> {
    pub c_frame: F,
    pub gamma_k: F,
    pub m_const: F,
}

/// Constants of the second critical case: the frame constant `C`, the
/// linear-growth constant `K` of `U(t) >= K ε t`, and the support radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CritP1Constants<F> {
    pub c_frame: F,
    pub k_const: F,
    pub r_support: F,
}

fn check_p<F: Real>(what: &'static str, p: F) -> Result<()> {
    if p > F::one() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, format!("p must exceed 1, got {p}")))
    }
}

fn smallest_index_at_least<F: Real>(x: F) -> u64 {
    if x <= F::zero() {
        0
    } else {
        x.ceil().to_u64().unwrap_or(u64::MAX)
    }
}

impl<F: Real> CritP0Constants<F> {
    /// `log D`, `D = C γ_k (p-1) / (4p)`.
    pub fn log_d(&self, p: F) -> F {
        (self.c_frame * self.gamma_k * (p - F::one()) / (F::lit(4.0) * p)).ln()
    }

    /// `log E`, `E = M (2p)^{-p/(p-1)²} D^{1/(p-1)}`.
    pub fn log_e(&self, p: F) -> F {
        let pm1 = p - F::one();
        self.m_const.ln() - p / (pm1 * pm1) * (F::lit(2.0) * p).ln() + self.log_d(p) / pm1
    }

    /// Smallest nonnegative integer `j₀ >= log D / log(2p) - p/(p-1)`.
    pub fn j0(&self, p: F) -> u64 {
        smallest_index_at_least(self.log_d(p) / (F::lit(2.0) * p).ln() - p / (p - F::one()))
    }
}

impl<F: Real> CritP1Constants<F> {
    fn log_base(&self, p: F) -> F {
        self.c_frame.ln() - (p + F::one()) * (self.r_support + F::one()).ln()
    }

    /// `log L`, `L = C (R+1)^{-(p+1)} (p-1) / (4p)`.
    pub fn log_l(&self, p: F) -> F {
        self.log_base(p) + ((p - F::one()) / (F::lit(4.0) * p)).ln()
    }

    /// `log K₀`, `K₀ = C K^p (R+1)^{-(p+1)} ε^p / 3`.
    pub fn log_k0(&self, p: F, eps: F) -> F {
        self.log_base(p) + p * (self.k_const * eps).ln() - F::lit(3.0).ln()
    }

    /// `log N`, `N = C K^p (R+1)^{-(p+1)} (2p)^{-p/(p-1)²} L^{1/(p-1)} / 3`.
    pub fn log_n(&self, p: F) -> F {
        let pm1 = p - F::one();
        self.log_k0(p, F::one()) - p / (pm1 * pm1) * (F::lit(2.0) * p).ln() + self.log_l(p) / pm1
    }

    pub fn j1(&self, p: F) -> u64 {
        smallest_index_at_least(self.log_l(p) / (F::lit(2.0) * p).ln() - p / (p - F::one()))
    }
}

/// `log C_j` from `C₀ = M ε^p` and
/// `C_{j+1} = C γ_k 2^{-(j+3)} (α_j p + 1)^{-1} C_j^p`.
pub fn log_c_sequence<F: Real>(consts: &CritP0Constants<F>, p: F, eps: F, j_max: usize) -> Vec<F> {
    let alpha = alpha_recursion(&p, j_max);
    let ln2 = F::LN_2();
    let mut out = vec![(consts.m_const * eps.powf(p)).ln()];
    for j in 0..j_max {
        let next = (consts.c_frame * consts.gamma_k).ln()
            - F::from_usize_lossy(j + 3) * ln2
            - (alpha[j] * p + F::one()).ln()
            + p * out[j];
        out.push(next);
    }
    out
}

/// `log K_j` from `K₀` and `K_{j+1} = C (R+1)^{-(p+1)} 2^{-(j+3)} (σ_j p + 1)^{-1} K_j^p`.
pub fn log_k_sequence<F: Real>(consts: &CritP1Constants<F>, p: F, eps: F, j_max: usize) -> Vec<F> {
    let sigma = alpha_recursion(&p, j_max);
    let ln2 = F::LN_2();
    let mut out = vec![consts.log_k0(p, eps)];
    for j in 0..j_max {
        let next =
            consts.log_base(p) - F::from_usize_lossy(j + 3) * ln2 - (sigma[j] * p + F::one()).ln()
                + p * out[j];
        out.push(next);
    }
    out
}

fn rational_from_real<F: Real>(p: F) -> Result<BigRational> {
    BigRational::from_float(p.to_f64_lossy())
        .ok_or_else(|| Error::domain("iteration", format!("p = {p} not finite")))
}

/// Builds the full trace: exact exponent sequences (with `p` taken as the
/// exact binary rational nearest the float), `log C_j`/`log K_j`, `j*` and the
/// amplitude constant.
pub fn iteration_trace_p0<F: Real>(
    consts: &CritP0Constants<F>,
    p: F,
    eps: F,
    j_max: usize,
) -> Result<IterationTrace<F>> {
    check_p("iteration_trace", p)?;
    let seq = slicing_sequences(IterationCase::CritP0, &rational_from_real(p)?, j_max)?;
    Ok(IterationTrace {
        case: IterationCase::CritP0,
        p,
        j_max,
        ell: (0..=j_max).map(ell).collect(),
        alpha: seq.alpha.iter().map(rational_to_string).collect(),
        beta: seq.beta.iter().map(rational_to_string).collect(),
        log_constant: log_c_sequence(consts, p, eps, j_max),
        j_star: consts.j0(p),
        log_amplitude_constant: consts.log_e(p),
        closed_form_agrees: seq.closed_form_agrees,
    })
}

pub fn iteration_trace_p1<F: Real>(
    consts: &CritP1Constants<F>,
    p: F,
    eps: F,
    j_max: usize,
) -> Result<IterationTrace<F>> {
    check_p("iteration_trace", p)?;
    let seq = slicing_sequences(IterationCase::CritP1, &rational_from_real(p)?, j_max)?;
    Ok(IterationTrace {
        case: IterationCase::CritP1,
        p,
        j_max,
        ell: (0..=j_max).map(ell).collect(),
        alpha: seq.alpha.iter().map(rational_to_string).collect(),
        beta: Vec::new(),
        log_constant: log_k_sequence(consts, p, eps, j_max),
        j_star: consts.j1(p),
        log_amplitude_constant: consts.log_n(p),
        closed_form_agrees: seq.closed_form_agrees,
    })
}

/// Integer rationals print as integers, others as `a/b`.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A lifespan bound `T = exp(log_time)`; `time` is `+∞` when `log_time` exceeds 700.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifespanThreshold<F> {
    pub log_time: F,
    pub time: F,
}

impl<F: Real> LifespanThreshold<F> {
    fn from_log_log(log_log: F) -> Self {
        let log_time = if log_log >= F::max_exp_arg() {
            F::infinity()
        } else {
            log_log.exp()
        };
        let time = if log_time > F::lit(700.0) {
            F::infinity()
        } else {
            log_time.exp()
        };
        Self { log_time, time }
    }
}

/// `T = exp(2^p E^{1-p} ε^{-p(p-1)})`.
pub fn lifespan_threshold_crit_p0<F: Real>(eps: F, p: F, log_e: F) -> Result<LifespanThreshold<F>> {
    check_p("lifespan_threshold_crit_p0", p)?;
    if !(eps > F::zero()) {
        return Err(Error::domain(
            "lifespan_threshold_crit_p0",
            format!("eps must be > 0, got {eps}"),
        ));
    }
    let ll = p * F::LN_2() + (F::one() - p) * log_e - p * (p - F::one()) * eps.ln();
    Ok(LifespanThreshold::from_log_log(ll))
}

/// `T = exp(2 N^{-(p-1)/p} ε^{-(p-1)})`, the time at which `H(T, ε) = 1`.
pub fn lifespan_threshold_crit_p1<F: Real>(eps: F, p: F, log_n: F) -> Result<LifespanThreshold<F>> {
    check_p("lifespan_threshold_crit_p1", p)?;
    if !(eps > F::zero()) {
        return Err(Error::domain(
            "lifespan_threshold_crit_p1",
            format!("eps must be > 0, got {eps}"),
        ));
    }
    let ll = F::LN_2() - (p - F::one()) / p * log_n - (p - F::one()) * eps.ln();
    Ok(LifespanThreshold::from_log_log(ll))
}

/// `J(t, ε) = 2^{-p/(p-1)} E ε^p (log t)^{1/(p-1)}`, taking `log t`.
pub fn j_function<F: Real>(log_t: F, eps: F, p: F, log_e: F) -> F {
    let pm1 = p - F::one();
    (-p / pm1 * F::LN_2() + log_e + p * eps.ln() + log_t.ln() / pm1).exp()
}

/// `H(t, ε) = 2^{-p/(p-1)} N ε^p (log t)^{p/(p-1)}`, taking `log t`.
pub fn h_function<F: Real>(log_t: F, eps: F, p: F, log_n: F) -> F {
    let pm1 = p - F::one();
    (-p / pm1 * F::LN_2() + log_n + p * eps.ln() + p / pm1 * log_t.ln()).exp()
}

/// `t₀(k) = max{4, γ_k^{-1/k}}`; undefined at `k = 0`.
pub fn t0<F: Real>(params: &SpacetimeParams<F>) -> Option<F> {
    if params.k > F::zero() {
        Some(F::lit(4.0).max(params.gamma_k().powf(-params.k.recip())))
    } else {
        None
    }
}

/// `t^{1-k} - γ_k ⟨A_k(t)⟩`, nonnegative for `t >= 1`.
pub fn gamma_k_margin<F: Real>(params: &SpacetimeParams<F>, t: F) -> F {
    t.powf(F::one() - params.k) - params.gamma_k() * angle_bracket(params.light_cone_a(t))
}

/// Hypotheses of Kato's lemma for `F'' >= B (t+R)^{-q} |F|^p`, `F >= A t^a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KatoInput<F> {
    pub p: F,
    pub a: F,
    pub q: F,
    #[serde(rename = "A")]
    pub amp_a: F,
    #[serde(rename = "B")]
    pub amp_b: F,
    #[serde(rename = "R")]
    pub r: F,
    #[serde(rename = "T0")]
    pub t0: F,
    pub tau: F,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KatoOutcome<F> {
    /// `M = (p-1)a/2 - q/2 + 1`.
    pub m: F,
    pub applicable: bool,
    pub t1: F,
    /// `2^{2/M} T₁`, present when applicable.
    pub bound: Option<F>,
    /// Largest `C₀` for which the side condition `T₁ >= C₀ A^{-(p-1)/(2M)}` holds.
    pub c0_max: Option<F>,
    /// Verdict of the side condition for a caller-supplied `C₀`.
    pub side_condition_holds: Option<bool>,
}

/// `T₁ = max{T₀, F(τ)/F'(τ), R}`.
pub fn kato_t1<F: Real>(t0: F, f_tau: F, fp_tau: F, r: F) -> F {
    t0.max(f_tau / fp_tau).max(r)
}

pub fn kato_evaluate<F: Real>(
    input: &KatoInput<F>,
    t1: F,
    c0: Option<F>,
) -> Result<KatoOutcome<F>> {
    check_p("kato_evaluate", input.p)?;
    if !(input.a > F::zero() && input.q > F::zero()) {
        return Err(Error::domain("kato_evaluate", "need a > 0 and q > 0"));
    }
    if !(input.amp_a > F::zero()
        && input.amp_b > F::zero()
        && input.r > F::zero()
        && input.t0 > F::zero()
        && input.tau > F::zero())
    {
        return Err(Error::domain(
            "kato_evaluate",
            "A, B, R, T0 and tau must be positive",
        ));
    }
    let two = F::lit(2.0);
    let m = (input.p - F::one()) / two * input.a - input.q / two + F::one();
    if m <= F::zero() {
        return Ok(KatoOutcome {
            m,
            applicable: false,
            t1,
            bound: None,
            c0_max: None,
            side_condition_holds: None,
        });
    }
    let c0_max = t1 * input.amp_a.powf((input.p - F::one()) / (two * m));
    Ok(KatoOutcome {
        m,
        applicable: true,
        t1,
        bound: Some(two.powf(two / m) * t1),
        c0_max: Some(c0_max),
        side_condition_holds: c0.map(|c| c <= c0_max),
    })
}

/// Outcome of checking an iteration frame along a sampled functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameCheck<F> {
    /// Largest `C` with `LHS(t) >= C · RHS(t)` at all samples; `+∞` when every
    /// right side vanishes.
    pub c_frame: F,
    pub samples: usize,
    /// Time at which the minimum ratio was attained.
    pub t_critical: F,
}

pub const FRAME_MIN_SAMPLES: usize = 16;

fn min_ratio<F: Real>(ts: &[F], lhs: &[F], rhs: &[F]) -> FrameCheck<F> {
    let mut c = F::infinity();
    let mut at = ts[0];
    for i in 0..ts.len() {
        if rhs[i] > F::zero() {
            let r = lhs[i] / rhs[i];
            if r < c {
                c = r;
                at = ts[i];
            }
        }
    }
    FrameCheck {
        c_frame: c,
        samples: ts.len(),
        t_critical: at,
    }
}

fn check_series<F: Real>(ts: &[F], vals: &[F]) -> Result<()> {
    if ts.len() != vals.len() {
        return Err(Error::InsufficientData(
            "time and value series differ in length".into(),
        ));
    }
    if ts.len() < FRAME_MIN_SAMPLES {
        return Err(Error::SeriesTooShort {
            samples: ts.len(),
            required: FRAME_MIN_SAMPLES,
        });
    }
    Ok(())
}

/// Largest `C` with
/// `𝒰(t) >= C ⟨A_k(t)⟩^{-1} ∫₁^t (φ_k(t) - φ_k(s))/s · (log⟨A_k(s)⟩)^{-(p-1)} 𝒰(s)^p ds`
/// along the sampled series (trapezoid rule on the sample times).
pub fn frame_check_p0<F: Real>(
    ts: &[F],
    vals: &[F],
    params: &SpacetimeParams<F>,
    p: F,
) -> Result<FrameCheck<F>> {
    check_series(ts, vals)?;
    let mut rhs = vec![F::zero(); ts.len()];
    let mut integrand = vec![F::zero(); ts.len()];
    for i in 0..ts.len() {
        let t = ts[i];
        let phi_t = params.phi(t);
        for j in 0..=i {
            let s = ts[j];
            let log_bracket = angle_bracket(params.light_cone_a(s)).ln();
            integrand[j] = (phi_t - params.phi(s)) / s
                * log_bracket.powf(-(p - F::one()))
                * vals[j].abs().powf(p);
        }
        rhs[i] = trapezoid(&ts[..=i], &integrand[..=i]) / angle_bracket(params.light_cone_a(t));
    }
    Ok(min_ratio(ts, vals, &rhs))
}

/// Largest `C` with `U(t) >= C ∫₁^t ∫₁^s (R+τ)^{-(p+1)} U(τ)^p dτ ds`.
pub fn frame_check_p1<F: Real>(ts: &[F], vals: &[F], p: F, r_support: F) -> Result<FrameCheck<F>> {
    check_series(ts, vals)?;
    let inner: Vec<F> = ts
        .iter()
        .zip(vals)
        .map(|(&t, &u)| (r_support + t).powf(-(p + F::one())) * u.abs().powf(p))
        .collect();
    let once = cumulative_trapezoid(ts, &inner);
    let twice = cumulative_trapezoid(ts, &once);
    Ok(min_ratio(ts, vals, &twice))
}

/// Checks the iteration frame of `case` along the pre-blow-up diagnostics of
/// a simulation: `𝒰` for the first critical case, `U` with the data radius as
/// `R` for the second.
pub fn iteration_frame_check<F: Real>(
    sim: &SimResult<F>,
    case: IterationCase,
) -> Result<FrameCheck<F>> {
    let cfg = &sim.config;
    let rows: Vec<_> = sim.pre_blowup().collect();
    let ts: Vec<F> = rows.iter().map(|d| d.t).collect();
    match case {
        IterationCase::CritP0 => {
            let vals = rows
                .iter()
                .map(|d| {
                    d.curly_u.ok_or_else(|| {
                        Error::InsufficientData("run has no 𝒰 series (aux disabled)".into())
                    })
                })
                .collect::<Result<Vec<F>>>()?;
            frame_check_p0(&ts, &vals, &cfg.params, cfg.p)
        }
        IterationCase::CritP1 => {
            let vals: Vec<F> = rows.iter().map(|d| d.u_integral).collect();
            frame_check_p1(&ts, &vals, cfg.p, cfg.data_profile.radius)
        }
    }
}

/// Existential constants fitted over declared grids, collected for reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FittedConstants<F> {
    #[serde(rename = "B0")]
    pub b0: Option<FittedConstant<F>>,
    #[serde(rename = "B1")]
    pub b1: Option<FittedConstant<F>>,
    #[serde(rename = "B2")]
    pub b2: Option<FittedConstant<F>>,
    #[serde(rename = "K_const")]
    pub k_const: Option<FittedConstant<F>>,
    #[serde(rename = "M_const")]
    pub m_const: Option<FittedConstant<F>>,
    #[serde(rename = "C_frame")]
    pub c_frame: Option<FittedConstant<F>>,
}

impl<F: Real> FittedConstants<F> {
    /// True when every present constant is strictly positive.
    pub fn all_positive(&self) -> bool {
        [
            &self.b0,
            &self.b1,
            &self.b2,
            &self.k_const,
            &self.m_const,
            &self.c_frame,
        ]
        .iter()
        .all(|c| c.as_ref().map_or(true, |c| c.value > F::zero()))
    }
}
