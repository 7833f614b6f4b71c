//! Target functions, the standard Gaussian measure, the separable reduction
//! of L² errors and a sharded Monte-Carlo estimator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ann::Network;
use crate::error::{param, shape, Error, Result};
use crate::quadrature::{integrate_line, integrate_to_infinity, std_normal_pdf, Tolerance};
use crate::special::log_add;

/// Per-coordinate summand `u(t) = max{|t| - √(2d), 0}²`.
pub fn hinge(d: usize, t: f64) -> f64 {
    let v = (t.abs() - (2.0 * d as f64).sqrt()).max(0.0);
    v * v
}

/// `f_d(x) = Σ_j u(x_j)`.
pub fn target_raw(d: usize, x: &[f64]) -> f64 {
    x.iter().map(|&t| hinge(d, t)).sum()
}

/// `log ∫ (t-a)_+^k dφ₁(t)` over both half-lines, `a = √(2d)`.
fn log_hinge_power_moment(a: f64, k: i32) -> Result<f64> {
    // ∫_a^∞ (t-a)^k φ(t) dt = φ(a) ∫_0^∞ s^k e^{-as - s²/2} ds
    let tol = Tolerance { abs: 1e-300, rel: 1e-13, max_intervals: 2000 };
    let j = integrate_to_infinity(|s| s.powi(k) * (-a * s - 0.5 * s * s).exp(), 0.0, tol)?;
    let log_phi_a = -0.5 * a * a - 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok(std::f64::consts::LN_2 + log_phi_a + j.value.ln())
}

/// `log ∫ u dφ₁` and `log ∫ u² dφ₁`.
pub fn log_hinge_moments(d: usize) -> Result<(f64, f64)> {
    if d == 0 {
        return Err(param("d must be >= 1"));
    }
    let a = (2.0 * d as f64).sqrt();
    Ok((log_hinge_power_moment(a, 2)?, log_hinge_power_moment(a, 4)?))
}

/// `log c_d` with `c_d = ∫ |f_d|² dφ_d = d m₂ + d(d-1) m₁²`.
pub fn log_normalization_const(d: usize) -> Result<f64> {
    let (lm1, lm2) = log_hinge_moments(d)?;
    let df = d as f64;
    let diag = df.ln() + lm2;
    if d == 1 {
        return Ok(diag);
    }
    Ok(log_add(diag, df.ln() + (df - 1.0).ln() + 2.0 * lm1))
}

/// `𝔣_d(x) = c_d^{-1/2} f_d(x)`.
pub fn normalized_target(d: usize, x: &[f64]) -> Result<f64> {
    if x.len() != d {
        return Err(shape(format!("input has length {}, expected {d}", x.len())));
    }
    Ok((-0.5 * log_normalization_const(d)?).exp() * target_raw(d, x))
}

/// How an [`ErrorEstimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMethod {
    Separable,
    MonteCarlo,
}

impl ErrorMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorMethod::Separable => "separable",
            ErrorMethod::MonteCarlo => "monte-carlo",
        }
    }
}

/// L²(φ_d) error (not squared). `std_error` and `samples` are set only for
/// Monte Carlo.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorEstimate {
    pub value: f64,
    pub method: ErrorMethod,
    pub std_error: Option<f64>,
    pub samples: Option<u64>,
}

impl std::fmt::Display for ErrorEstimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        write!(
            f,
            "method={} value={:e} std_error={} samples={}",
            self.method.as_str(),
            self.value,
            opt(self.std_error.map(|s| format!("{s:e}"))),
            opt(self.samples.map(|s| s.to_string()))
        )
    }
}

/// Error of `x -> scale·Σ_j ψ(x_j)` against `𝔣_d`, where ψ is a univariate
/// network.
pub fn l2_error_separable(psi: &Network, scale: f64, d: usize) -> Result<ErrorEstimate> {
    if psi.input_dim() != 1 || psi.output_dim() != 1 {
        return Err(shape(format!(
            "ψ must map R to R, got {} inputs and {} outputs",
            psi.input_dim(),
            psi.output_dim()
        )));
    }
    let (mut a, mut b) = (Vec::with_capacity(8), Vec::with_capacity(8));
    l2_error_separable_fn(|t| psi.realize_with(&[t], &mut a, &mut b)[0], scale, d, &[])
}

/// Separable error for an arbitrary univariate `ψ`; `breaks` adds known kinks
/// to the default split at `±√(2d)`.
pub fn l2_error_separable_fn(
    mut psi: impl FnMut(f64) -> f64,
    scale: f64,
    d: usize,
    breaks: &[f64],
) -> Result<ErrorEstimate> {
    let (lm1, lm2) = log_hinge_moments(d)?;
    let log_c = log_normalization_const(d)?;
    let k = (-0.5 * log_c).exp();
    // Tolerances relative to the size of the target's own moments.
    let t1 = Tolerance { abs: 1e-12 * (lm1 - 0.5 * log_c).exp(), rel: 1e-10, max_intervals: 20_000 };
    let t2 = Tolerance { abs: 1e-12 * (lm2 - log_c).exp(), rel: 1e-10, max_intervals: 20_000 };
    let (e1, e2) = gaussian_moments(|t| scale * psi(t) - k * hinge(d, t), d, breaks, t1, t2)?;
    let sq = sum_of_coordinates_sq(d, e1, e2);
    Ok(ErrorEstimate { value: sq.max(0.0).sqrt(), method: ErrorMethod::Separable, std_error: None, samples: None })
}

/// `∫ |scale·Σ_j ψ(x_j)|² dφ_d` by the same reduction.
pub fn l2_norm_sq_separable(psi: &Network, scale: f64, d: usize) -> Result<f64> {
    if psi.input_dim() != 1 || psi.output_dim() != 1 {
        return Err(shape("ψ must map R to R"));
    }
    let (a, b) = (&mut Vec::new(), &mut Vec::new());
    let tol = Tolerance { abs: 1e-300, rel: 1e-10, max_intervals: 20_000 };
    let (e1, e2) = gaussian_moments(|t| scale * psi.realize_with(&[t], a, b)[0], d, &[], tol, tol)?;
    Ok(sum_of_coordinates_sq(d, e1, e2))
}

/// `d E[Δ²] + d(d-1) E[Δ]²`.
fn sum_of_coordinates_sq(d: usize, e1: f64, e2: f64) -> f64 {
    let df = d as f64;
    df * e2 + df * (df - 1.0) * e1 * e1
}

/// `(∫ Δ dφ₁, ∫ Δ² dφ₁)`, split at `±√(2d)` and `breaks`.
fn gaussian_moments(
    mut delta: impl FnMut(f64) -> f64,
    d: usize,
    breaks: &[f64],
    t1: Tolerance,
    t2: Tolerance,
) -> Result<(f64, f64)> {
    let a = (2.0 * d as f64).sqrt();
    let mut cuts = vec![-a, a];
    cuts.extend_from_slice(breaks);
    let e2 = integrate_line(
        |t| {
            let v = delta(t);
            v * v * std_normal_pdf(t)
        },
        &cuts,
        t2,
    )?
    .value;
    let e1 = integrate_line(|t| delta(t) * std_normal_pdf(t), &cuts, t1)?.value;
    if !(e1.is_finite() && e2.is_finite()) {
        return Err(Error::Quadrature("non-finite separable moment".into()));
    }
    Ok((e1, e2))
}

/// Plain Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

const SHARD: u64 = 8192;

/// Standard normal variate from the top 52 bits of `bits` via the inverse
/// CDF at `u = (k + ½)/2^52`. Both tails are evaluated on their own side so
/// the transform is exactly antisymmetric in `k`.
pub fn normal_from_bits(bits: u64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 52) as f64;
    let k = (bits >> 12) as f64;
    let u = (k + 0.5) * SCALE;
    if u < 0.5 {
        -std::f64::consts::SQRT_2 * statrs::function::erf::erfc_inv(2.0 * u)
    } else {
        let v = ((1u64 << 52) as f64 - k - 0.5) * SCALE;
        std::f64::consts::SQRT_2 * statrs::function::erf::erfc_inv(2.0 * v)
    }
}

/// Mean of `f(X)` for `X ~ N(0, std² I_d)`. Shard `i` draws from the ChaCha8
/// stream `(seed, i)`, so the result does not depend on the worker count.
pub fn mc_mean<S, I, F>(d: usize, samples: u64, seed: u64, std: f64, init: I, f: F) -> Result<McEstimate>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &[f64]) -> f64 + Sync,
{
    let mut out = mc_means(
        d,
        samples,
        seed,
        1,
        || (init(), vec![0.0; d]),
        |(s, x), z, y| {
            for (xi, zi) in x.iter_mut().zip(z) {
                *xi = std * zi;
            }
            y[0] = f(s, x);
        },
    )?;
    Ok(out.remove(0))
}

/// Means of `k` statistics of one shared stream of standard normal vectors
/// `Z ∈ R^d`; `f` writes the `k` values for each draw.
pub fn mc_means<S, I, F>(d: usize, samples: u64, seed: u64, k: usize, init: I, f: F) -> Result<Vec<McEstimate>>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &[f64], &mut [f64]) + Sync,
{
    if samples < 2 {
        return Err(param("Monte Carlo needs at least 2 samples"));
    }
    let shards = samples.div_ceil(SHARD);
    let parts: Vec<Vec<(f64, f64, f64)>> = (0..shards)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let n = SHARD.min(samples - i * SHARD);
            let mut state = init();
            let mut z = vec![0.0; d];
            let mut y = vec![0.0; k];
            let mut acc = vec![(n as f64, 0.0, 0.0); k];
            for j in 0..n {
                for v in z.iter_mut() {
                    *v = normal_from_bits(rng.next_u64());
                }
                f(&mut state, &z, &mut y);
                for (a, &yi) in acc.iter_mut().zip(&y) {
                    let delta = yi - a.1;
                    a.1 += delta / (j + 1) as f64;
                    a.2 += delta * (yi - a.1);
                }
            }
            acc
        })
        .collect();
    (0..k)
        .map(|c| {
            let (mut n, mut mean, mut m2) = (0.0, 0.0, 0.0);
            for part in &parts {
                let (nb, mb, m2b) = part[c];
                let tot = n + nb;
                let delta = mb - mean;
                mean += delta * nb / tot;
                m2 += m2b + delta * delta * n * nb / tot;
                n = tot;
            }
            let var = m2 / (n - 1.0);
            if !mean.is_finite() || !var.is_finite() {
                return Err(Error::Numeric("non-finite Monte Carlo estimate".into()));
            }
            Ok(McEstimate { mean, std_error: (var / n).sqrt(), samples })
        })
        .collect()
}

/// Monte-Carlo estimate of `(∫ |ℛ(net) - 𝔣_d|² dφ_d)^{1/2}` with the
/// delta-method standard error.
pub fn l2_error_mc(net: &Network, d: usize, samples: u64, seed: u64) -> Result<ErrorEstimate> {
    if net.input_dim() != d || net.output_dim() != 1 {
        return Err(shape(format!(
            "network must map R^{d} to R, got {} inputs and {} outputs",
            net.input_dim(),
            net.output_dim()
        )));
    }
    let k = (-0.5 * log_normalization_const(d)?).exp();
    let est = mc_mean(
        d,
        samples,
        seed,
        1.0,
        || (Vec::new(), Vec::new()),
        |(a, b), x| {
            let e = net.realize_with(x, a, b)[0] - k * target_raw(d, x);
            e * e
        },
    )?;
    let value = est.mean.sqrt();
    let std_error = if value > 0.0 { est.std_error / (2.0 * value) } else { 0.0 };
    Ok(ErrorEstimate { value, method: ErrorMethod::MonteCarlo, std_error: Some(std_error), samples: Some(samples) })
}
