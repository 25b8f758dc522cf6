//! Gauss-Legendre rules and adaptive Gauss-Kronrod integration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Computed once per size by Newton iteration on the Legendre recurrence and
/// cached for the lifetime of the process.
pub fn gauss_legendre(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("gauss-legendre cache").get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(legendre_rule(n));
    cache
        .lock()
        .expect("gauss-legendre cache")
        .entry(n)
        .or_insert_with(|| Arc::clone(&rule))
        .clone()
}

fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut rule = vec![(0.0, 0.0); n];
    let m = (n + 1) / 2;
    let nf = n as f64;
    for i in 0..m {
        // Tricomi initial guess for the i-th root from the right.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (-x, w);
        rule[n - 1 - i] = (x, w);
    }
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Fixed-order Gauss-Legendre integral of `f` over `[a, b]`.
pub fn gauss_legendre_integral<F: Real>(n: usize, a: F, b: F, mut f: impl FnMut(F) -> F) -> F {
    let rule = gauss_legendre(n);
    let half = (b - a) * F::lit(0.5);
    let mid = (b + a) * F::lit(0.5);
    let mut acc = F::zero();
    for &(x, w) in rule.iter() {
        acc += F::lit(w) * f(mid + half * F::lit(x));
    }
    acc * half
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Real>(a: F, b: F, f: &mut impl FnMut(F) -> F) -> (F, F) {
    let half = (b - a) * F::lit(0.5);
    let mid = (b + a) * F::lit(0.5);
    let fc = f(mid);
    let mut resk = fc * F::lit(WGK[7]);
    let mut resg = fc * F::lit(WG[3]);
    for j in 0..7 {
        let dx = half * F::lit(XGK[j]);
        let pair = f(mid - dx) + f(mid + dx);
        resk += F::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            resg += F::lit(WG[j / 2]) * pair;
        }
    }
    (resk * half, ((resk - resg) * half).abs())
}

struct Segment<F> {
    a: F,
    b: F,
    value: F,
    error: F,
}

impl<F: Real> PartialEq for Segment<F> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<F: Real> Eq for Segment<F> {}
impl<F: Real> PartialOrd for Segment<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<F: Real> Ord for Segment<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Tolerances for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveTolerance<F> {
    pub abs: F,
    pub rel: F,
    pub max_segments: usize,
}

impl<F: Real> Default for AdaptiveTolerance<F> {
    fn default() -> Self {
        Self {
            abs: F::lit(1e-300),
            rel: F::lit(1e-12),
            max_segments: 4000,
        }
    }
}

/// Globally adaptive 7/15-point Gauss-Kronrod integration over `[a, b]`.
pub fn integrate_adaptive<F: Real>(
    what: &'static str,
    a: F,
    b: F,
    tol: AdaptiveTolerance<F>,
    mut f: impl FnMut(F) -> F,
) -> Result<F> {
    if a == b {
        return Ok(F::zero());
    }
    let (value, error) = kronrod15(a, b, &mut f);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    while total_err > tol.abs.max(tol.rel * total.abs()) {
        if heap.len() >= tol.max_segments {
            return Err(Error::Quadrature {
                what,
                estimate: total_err.to_f64_lossy(),
            });
        }
        let seg = heap.pop().expect("heap is non-empty");
        let mid = (seg.a + seg.b) * F::lit(0.5);
        let (v1, e1) = kronrod15(seg.a, mid, &mut f);
        let (v2, e2) = kronrod15(mid, seg.b, &mut f);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        if !total.is_finite() {
            return Err(Error::Quadrature {
                what,
                estimate: f64::INFINITY,
            });
        }
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed accumulated update rounding.
    Ok(heap.iter().fold(F::zero(), |acc, s| acc + s.value))
}

/// Composite trapezoid rule over samples `(x_i, y_i)` sorted by `x`.
pub fn trapezoid<F: Real>(xs: &[F], ys: &[F]) -> F {
    debug_assert_eq!(xs.len(), ys.len());
    xs.windows(2)
        .zip(ys.windows(2))
        .fold(F::zero(), |acc, (x, y)| {
            acc + (x[1] - x[0]) * (y[0] + y[1]) * F::lit(0.5)
        })
}

/// Running trapezoid integral: `out[i] = ∫_{x_0}^{x_i} y`.
pub fn cumulative_trapezoid<F: Real>(xs: &[F], ys: &[F]) -> Vec<F> {
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = F::zero();
    if !xs.is_empty() {
        out.push(acc);
    }
    for i in 1..xs.len() {
        acc += (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]) * F::lit(0.5);
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 64, 128] {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n={n} weight sum {wsum}");
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            let approx: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            assert!((approx - exact).abs() < 1e-12, "n={n}");
            let even = 2 * n - 2;
            let approx: f64 = rule.iter().map(|&(x, w)| w * x.powi(even as i32)).sum();
            assert!((approx - 2.0 / (even as f64 + 1.0)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let v = integrate_adaptive("sqrt", 0.0, 1.0, AdaptiveTolerance::default(), |x: f64| {
            x.sqrt()
        })
        .unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
        let v = integrate_adaptive("exp", 0.0, 3.0, AdaptiveTolerance::default(), |x: f64| {
            x.exp()
        })
        .unwrap();
        assert!((v - (3.0f64.exp() - 1.0)).abs() < 1e-12 * v);
    }

    #[test]
    fn trapezoid_is_exact_for_lines() {
        let xs = [0.0, 0.5, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((trapezoid(&xs, &ys) - 12.0).abs() < 1e-14);
        let c = cumulative_trapezoid(&xs, &ys);
        assert!((c[2] - 6.0).abs() < 1e-14);
    }
}
