//! Lower-bound certificate for a candidate network and the resulting floor
//! on its size.

use super::{params, BoundReport, Scale};
use crate::ann::Network;
use crate::error::{domain, Result};

/// Quantities entering the certificate. Integrals are against
/// `φ = (σ/π)^{d/2} e^{-σ‖x‖²}`; `ball_mass` is the mass of the normalized
/// target on the ball of radius `√(d(1+β))/√(2σ)` and must be supplied by the
/// caller.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateInput {
    pub d: usize,
    pub beta: f64,
    pub sigma: f64,
    pub realization_l2: f64,
    pub ball_mass: f64,
    pub approx_error_sq: f64,
    pub depth: usize,
    pub params: usize,
    pub inf_norm: f64,
}

impl CertificateInput {
    /// Architecture fields taken from `net`; integrals left for the caller.
    pub fn for_network(net: &Network, beta: f64, sigma: f64) -> Self {
        Self {
            d: net.input_dim(),
            beta,
            sigma,
            realization_l2: 0.0,
            ball_mass: 0.0,
            approx_error_sq: 0.0,
            depth: net.depth(),
            params: net.param_count(),
            inf_norm: net.inf_norm(),
        }
    }
}

/// `ℒ(𝒫 max{1,‖𝒯‖_∞}/(2ℒ))^ℒ ≥ (e^β/(1+β))^{d/6} (2√σ ‖ℛ‖)/(d^{3/2}√(6+4β+σ))
/// · [1 - √ball_mass - approx_error_sq]`, in log scale. A non-positive bracket
/// makes the right side `-∞`.
pub fn main1_certificate(input: &CertificateInput) -> Result<BoundReport> {
    let c = input;
    if c.d < 4 {
        return Err(domain(format!("main1_certificate requires d >= 4, got {}", c.d)));
    }
    if !(c.beta > 0.0 && c.sigma > 0.0) {
        return Err(domain("main1_certificate needs β, σ > 0"));
    }
    if !(c.realization_l2 > 0.0) || !(c.ball_mass >= 0.0) || !(c.approx_error_sq >= 0.0) {
        return Err(domain("main1_certificate needs realization_l2 > 0 and nonnegative integrals"));
    }
    if c.depth == 0 || c.params == 0 {
        return Err(domain("main1_certificate needs a non-empty network"));
    }
    let (df, l) = (c.d as f64, c.depth as f64);
    let size = l.ln() + l * (c.params as f64 * c.inf_norm.max(1.0) / (2.0 * l)).ln();
    let bracket = 1.0 - c.ball_mass.sqrt() - c.approx_error_sq;
    let needed = if bracket > 0.0 {
        df / 6.0 * (c.beta - (1.0 + c.beta).ln()) + (2.0 * c.sigma.sqrt()).ln() + 0.5 * c.realization_l2.ln()
            - 1.5 * df.ln()
            - 0.5 * (6.0 + 4.0 * c.beta + c.sigma).ln()
            + bracket.ln()
    } else {
        f64::NEG_INFINITY
    };
    Ok(BoundReport::new(
        "main1_certificate",
        params(&[
            ("d", df),
            ("beta", c.beta),
            ("sigma", c.sigma),
            ("L", l),
            ("P", c.params as f64),
            ("bracket", bracket),
        ]),
        needed,
        size,
        Scale::Log,
    ))
}

/// `log[(2/7) d^{-3/2} e^{d/(20L)}]`.
pub fn cor_main_floor(d: usize, l: usize) -> Result<f64> {
    if d < 4 {
        return Err(domain(format!("cor_main_floor requires d >= 4, got {d}")));
    }
    if l == 0 {
        return Err(domain("cor_main_floor requires L >= 1"));
    }
    let df = d as f64;
    Ok((2.0f64 / 7.0).ln() - 1.5 * df.ln() + df / (20.0 * l as f64))
}

/// `𝒫 max{1,‖𝒯‖_∞} ≥ floor(d, ℒ)` for a network whose squared error is at
/// most `1/4`.
pub fn cor_main_check(net: &Network, error_sq: f64) -> Result<BoundReport> {
    if !(error_sq <= 0.25) {
        return Err(domain(format!("cor_main needs squared error <= 1/4, got {error_sq}")));
    }
    let (d, l) = (net.input_dim(), net.depth());
    let floor = cor_main_floor(d, l)?;
    let size = (net.param_count() as f64).ln() + net.inf_norm().max(1.0).ln();
    Ok(BoundReport::new(
        "cor_main",
        params(&[("d", d as f64), ("L", l as f64), ("P", net.param_count() as f64)]),
        floor,
        size,
        Scale::Log,
    ))
}
