//! Gaussian masses in log space: radial integrals and 1-D tails.

use crate::error::{domain, Result};
use crate::quadrature::{integrate, integrate_to_infinity, Tolerance};
use crate::special::ln_gamma_pos;

const TOL: Tolerance = Tolerance { abs: 1e-300, rel: 1e-12, max_intervals: 4000 };

/// `log ∫_{s0 ≤ ‖y‖ ≤ s1} (σ/π)^{d/2} ‖x‖^α e^{-σ‖x‖²} dx` through the radial
/// formula `(2σ^{d/2}/Γ(d/2)) ∫ e^{-σr²} r^{α+d-1} dr`. `s1 = None` is the
/// whole tail.
pub fn radial_log_mass(d: usize, sigma: f64, alpha: f64, s0: f64, s1: Option<f64>) -> Result<f64> {
    if d == 0 {
        return Err(domain("radial integral needs d >= 1"));
    }
    if !(sigma > 0.0) || !(alpha >= 0.0) || !(s0 >= 0.0) {
        return Err(domain(format!("radial integral needs σ > 0, α >= 0, s >= 0 (σ={sigma}, α={alpha}, s={s0})")));
    }
    if let Some(hi) = s1 {
        if !(hi >= s0) {
            return Err(domain(format!("radial integral needs s1 >= s0, got [{s0}, {hi}]")));
        }
        if hi == s0 {
            return Ok(f64::NEG_INFINITY);
        }
    }
    let df = d as f64;
    let p = alpha + df - 1.0;
    let h = |r: f64| if p == 0.0 { -sigma * r * r } else { -sigma * r * r + p * r.ln() };
    let peak = (p / (2.0 * sigma)).sqrt();
    let hi = s1.unwrap_or(f64::INFINITY);
    let anchor = peak.clamp(s0, hi);
    let c = h(anchor);
    let g = |r: f64| if r <= 0.0 && p > 0.0 { 0.0 } else { (h(r) - c).exp() };
    let mut total = 0.0;
    if s0 < anchor {
        total += integrate(g, s0, anchor, TOL)?.value;
    }
    total += match s1 {
        Some(hi) if anchor < hi => integrate(g, anchor, hi, TOL)?.value,
        Some(_) => 0.0,
        None => integrate_to_infinity(g, anchor, TOL)?.value,
    };
    let prefactor = std::f64::consts::LN_2 + 0.5 * df * sigma.ln() - ln_gamma_pos(0.5 * df);
    Ok(prefactor + c + total.ln())
}

/// `log ∫_{‖y‖ ≥ s} (σ/π)^{d/2} ‖x‖^α e^{-σ‖x‖²} dx`.
pub fn radial_gaussian_integral(d: usize, sigma: f64, alpha: f64, s: f64) -> Result<f64> {
    radial_log_mass(d, sigma, alpha, s, None)
}

/// `log ∫_s^∞ e^{-σx²} dx` for `s >= 0`.
pub fn log_gauss_tail_1d(sigma: f64, s: f64) -> Result<f64> {
    if !(sigma > 0.0) || !(s >= 0.0) {
        return Err(domain(format!("Gaussian tail needs σ > 0 and s >= 0 (σ={sigma}, s={s})")));
    }
    // e^{-σx²} = e^{-σs²} e^{-σ(x-s)(x+s)}
    let j = integrate_to_infinity(|x| (-sigma * (x - s) * (x + s)).exp(), s, TOL)?;
    Ok(-sigma * s * s + j.value.ln())
}

/// `log ∫_0^s e^{-σx²} dx` for `s > 0`.
pub fn log_gauss_head_1d(sigma: f64, s: f64) -> Result<f64> {
    if !(sigma > 0.0) || !(s > 0.0) {
        return Err(domain(format!("Gaussian head needs σ > 0 and s > 0 (σ={sigma}, s={s})")));
    }
    Ok(integrate(|x| (-sigma * x * x).exp(), 0.0, s, TOL)?.value.ln())
}
