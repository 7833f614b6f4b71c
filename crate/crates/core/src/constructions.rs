//! Explicit approximator networks: the sawtooth square net, its scaled and
//! shifted variants, λ-multiplier chains and the deep target approximator.

use crate::ann::{Layer, Matrix, Network};
use crate::calculus::{affine_net, compose, identity_net, parallelize, power, scalar_mul, sum_net};
use crate::error::{param, Result};
use crate::measures::log_normalization_const;

/// `2^e` built from the exponent bits, exact over the whole f64 range.
pub fn pow2(e: i32) -> f64 {
    if (-1022..=1023).contains(&e) {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e > 1023 {
        f64::INFINITY
    } else {
        let mut v = f64::from_bits(1u64 << 52); // 2^-1022
        for _ in e..-1022 {
            v *= 0.5;
        }
        v
    }
}

/// Sawtooth `g_n`: `g_1` is the hat on `[0,1]`, `g_{n+1} = g_1 ∘ g_n`.
pub fn sawtooth_oracle(n: u32, x: f64) -> f64 {
    fn g1(x: f64) -> f64 {
        if (0.0..0.5).contains(&x) {
            2.0 * x
        } else if (0.5..=1.0).contains(&x) {
            2.0 - 2.0 * x
        } else {
            0.0
        }
    }
    (0..n.max(1)).fold(x, |v, _| g1(v))
}

/// Piecewise-linear interpolant `f_n` of `x²` on the dyadic grid of `[0,1]`.
/// Cells are left-closed, so a dyadic point belongs to the cell it starts.
pub fn interpolant_oracle(n: u32, x: f64) -> f64 {
    if x >= 1.0 {
        return 1.0;
    }
    let scale = pow2(n as i32);
    let k = (x * scale).floor().clamp(0.0, scale - 1.0);
    let inv = pow2(-(n as i32));
    (2.0 * k + 1.0) * inv * x - (k * k + k) * inv * inv
}

/// Weight blocks `(A_k, 𝔸, 𝔹, C_k, c_k)` of the square net.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareNetWeights {
    pub a_in: Matrix,
    pub b: Vec<f64>,
}

impl SquareNetWeights {
    pub fn new() -> Self {
        Self { a_in: Matrix::column(&[1.0; 4]), b: vec![0.0, -0.5, -1.0, 0.0] }
    }

    /// `c_k = 2^{1-2k}`.
    pub fn c(k: u32) -> f64 {
        pow2(1 - 2 * k as i32)
    }

    pub fn c_row(k: u32) -> Vec<f64> {
        let c = Self::c(k);
        vec![-c, 2.0 * c, -c, 1.0]
    }

    pub fn a_k(k: u32) -> Matrix {
        let saw = vec![2.0, -4.0, 2.0, 0.0];
        Matrix::from_rows(&[saw.clone(), saw.clone(), saw, Self::c_row(k)]).expect("4x4")
    }

    pub fn c_k(k: u32) -> Matrix {
        Matrix::row(&Self::c_row(k))
    }
}

impl Default for SquareNetWeights {
    fn default() -> Self {
        Self::new()
    }
}

/// `((𝔸,𝔹), (A_1,𝔹), ..., (A_{M-1},𝔹), (C_M,0))`: equals `f_M` on `[0,1]`
/// and ReLU elsewhere.
pub fn square_net(m: u32) -> Result<Network> {
    if m == 0 {
        return Err(param("square_net needs M >= 1"));
    }
    let sw = SquareNetWeights::new();
    let mut layers = vec![Layer::new(sw.a_in.clone(), sw.b.clone())?];
    for k in 1..m {
        layers.push(Layer::new(SquareNetWeights::a_k(k), sw.b.clone())?);
    }
    layers.push(Layer::new(SquareNetWeights::c_k(m), vec![0.0])?);
    Network::new(layers)
}

fn scalar_affine(w: f64, b: f64) -> Result<Network> {
    affine_net(Matrix::new(1, 1, vec![w])?, vec![b])
}

/// `𝐀_{R²,0} • square_net(M) • 𝐀_{1/R,0}`: approximates `ReLU(x)²` on `[0,R]`.
pub fn scaled_square_net(m: u32, r: f64) -> Result<Network> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(param(format!("scaled_square_net needs finite R >= 1, got {r}")));
    }
    let inner = compose(&square_net(m)?, &scalar_affine(1.0 / r, 0.0)?)?;
    compose(&scalar_affine(r * r, 0.0)?, &inner)
}

/// Realizes `x -> |x| - a`.
pub fn abs_shift_net(a: f64) -> Result<Network> {
    if !a.is_finite() {
        return Err(param("abs_shift_net needs finite a"));
    }
    Network::from_parts(vec![
        (vec![vec![1.0], vec![-1.0]], vec![0.0, 0.0]),
        (vec![vec![1.0, 1.0]], vec![-a]),
    ])
}

/// Approximates `ReLU(|x| - a)²`.
pub fn hinge_square_net(a: f64, m: u32, r: f64) -> Result<Network> {
    if m < 2 {
        return Err(param(format!("hinge_square_net needs M >= 2, got {m}")));
    }
    if !(a >= 0.0) {
        return Err(param(format!("hinge_square_net needs a >= 0, got {a}")));
    }
    compose(&scaled_square_net(m, r)?, &abs_shift_net(a)?)
}

/// `ℐ^{•n} • f` with `ℐ = (λ ⊛ 𝕀_O) • 𝐀_{λI,0}`; realizes `λ^{2n} f`.
pub fn lambda_power_chain(lambda: f64, n: usize, f: &Network) -> Result<Network> {
    if n == 0 {
        return Err(param("lambda_power_chain needs n >= 1"));
    }
    if !lambda.is_finite() {
        return Err(param("lambda_power_chain needs finite λ"));
    }
    let o = f.output_dim();
    let step = compose(
        &scalar_mul(lambda, &identity_net(o)?)?,
        &affine_net(Matrix::scaled_identity(o, lambda), vec![0.0; o])?,
    )?;
    compose(&power(&step, n)?, f)
}

/// Parameters of the deep approximator.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetNetSpec {
    pub d: usize,
    pub m: u32,
    pub r: f64,
    pub lambda: f64,
    pub log_c_d: f64,
}

impl TargetNetSpec {
    /// `λ^{2d} = c_d^{-1/2}`, evaluated in log space.
    pub fn scale(&self) -> f64 {
        (-0.5 * self.log_c_d).exp()
    }

    /// Shift `√(2d)` of the per-coordinate hinge.
    pub fn shift(&self) -> f64 {
        (2.0 * self.d as f64).sqrt()
    }
}

/// `(ℐ^{•d}) • 𝔖_{1,d} • 𝐏_d(ψ, ..., ψ)` with `ψ = hinge_square_net(√(2d), M, R)`.
pub fn target_net(d: usize, m: u32, r: f64) -> Result<(Network, TargetNetSpec)> {
    if d == 0 {
        return Err(param("target_net needs d >= 1"));
    }
    if m < 2 {
        return Err(param(format!("target_net needs M >= 2, got {m}")));
    }
    let log_c_d = log_normalization_const(d)?;
    let lambda = (-log_c_d / (4.0 * d as f64)).exp();
    let spec = TargetNetSpec { d, m, r, lambda, log_c_d };
    let psi = hinge_square_net(spec.shift(), m, r)?;
    let copies = vec![&psi; d];
    let summed = compose(&sum_net(1, d)?, &parallelize(&copies)?)?;
    let net = lambda_power_chain(lambda, d, &summed)?;
    Ok((net, spec))
}

/// Inner univariate network `ψ` of [`target_net`].
pub fn target_psi(spec: &TargetNetSpec) -> Result<Network> {
    hinge_square_net(spec.shift(), spec.m, spec.r)
}

/// `R = 9 d ε^{-1/2}`, `M = ⌊R⌋`.
pub fn eps_parameters(d: usize, eps: f64) -> Result<(u32, f64)> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(param(format!("ε must lie in (0,1], got {eps}")));
    }
    if d == 0 {
        return Err(param("d must be >= 1"));
    }
    let r = 9.0 * d as f64 / eps.sqrt();
    let m = r.floor();
    if m > u32::MAX as f64 {
        return Err(param("ε too small: M overflows"));
    }
    Ok((m as u32, r))
}

pub fn target_net_for_eps(d: usize, eps: f64) -> Result<(Network, TargetNetSpec)> {
    let (m, r) = eps_parameters(d, eps)?;
    target_net(d, m, r)
}
