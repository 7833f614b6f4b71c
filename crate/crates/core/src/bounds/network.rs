//! Catalog entries whose inputs are matrices, vectors or networks.

use super::{params, BoundReport, Scale};
use crate::ann::{Matrix, Network};
use crate::error::{domain, shape, Result};
use crate::measures::mc_means;

/// `‖Ax+B‖_∞ ≤ √n max|A| ‖x‖₂ + ‖B‖_∞` and `≤ n max|A| ‖x‖_∞ + ‖B‖_∞`.
pub fn matrix_norm(a: &Matrix, b: &[f64], x: &[f64]) -> Result<Vec<BoundReport>> {
    if b.len() != a.rows() {
        return Err(shape(format!("B has length {}, A has {} rows", b.len(), a.rows())));
    }
    let y = a.matvec(x)?;
    let lhs = y.iter().zip(b).fold(0.0f64, |m, (yi, bi)| m.max((yi + bi).abs()));
    let n = a.cols() as f64;
    let amax = a.max_abs();
    let binf = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let x2 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let xinf = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ps = params(&[("m", a.rows() as f64), ("n", n)]);
    Ok(vec![
        BoundReport::new("matrix_norm.l2", ps.clone(), lhs, n.sqrt() * amax * x2 + binf, Scale::Linear),
        BoundReport::new("matrix_norm.linf", ps, lhs, n * amax * xinf + binf, Scale::Linear),
    ])
}

fn log_growth(net: &Network) -> f64 {
    let l = net.depth() as f64;
    let p = net.param_count() as f64;
    (p * net.inf_norm().max(1.0) / (2.0 * l)).ln()
}

/// `‖ℛ(Φ)(x)‖_∞ ≤ (𝒫 max{1,‖𝒯‖_∞}/(2ℒ))^ℒ (‖x‖₂ + ℒ)`.
pub fn apriori_realization(net: &Network, x: &[f64]) -> Result<BoundReport> {
    let y = net.realize(x)?;
    let yinf = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let l = net.depth() as f64;
    let x2 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(BoundReport::new(
        "apriori_realization",
        params(&[("L", l), ("P", net.param_count() as f64), ("x_norm", x2)]),
        yinf.ln(),
        l * log_growth(net) + (x2 + l).ln(),
        Scale::Log,
    ))
}

/// Tail bound for `∫_{‖y‖ ≥ √(d(1+β))/√(2σ)} |ℛ(Φ)|² φ` with
/// `φ = (σ/π)^{d/2} e^{-σ‖x‖²}`. The left side is a one-sided Monte-Carlo
/// upper estimate (mean + 3 standard errors). One sample stream serves every
/// `(β, σ)` pair.
pub fn realization_tail(net: &Network, betas: &[f64], sigmas: &[f64], samples: u64, seed: u64) -> Result<Vec<BoundReport>> {
    let d = net.input_dim();
    if d < 4 {
        return Err(domain(format!("realization_tail requires d >= 4, got {d}")));
    }
    if net.output_dim() != 1 {
        return Err(shape("realization_tail needs a scalar network"));
    }
    if betas.iter().chain(sigmas).any(|v| !(*v > 0.0)) {
        return Err(domain("realization_tail needs β, σ > 0"));
    }
    let df = d as f64;
    let radii2: Vec<Vec<f64>> = sigmas
        .iter()
        .map(|s| betas.iter().map(|b| df * (1.0 + b) / (2.0 * s)).collect())
        .collect();
    let k = betas.len() * sigmas.len();
    let est = mc_means(
        d,
        samples,
        seed,
        k,
        || (Vec::new(), Vec::new(), vec![0.0; d]),
        |(a, b, x), z, y| {
            let z2: f64 = z.iter().map(|v| v * v).sum();
            for (si, sigma) in sigmas.iter().enumerate() {
                let scale = 1.0 / (2.0 * sigma).sqrt();
                for (xi, zi) in x.iter_mut().zip(z) {
                    *xi = scale * zi;
                }
                let x2 = z2 * scale * scale;
                let r = net.realize_with(x, a, b)[0];
                for (bi, r2) in radii2[si].iter().enumerate() {
                    y[si * betas.len() + bi] = if x2 >= *r2 { r * r } else { 0.0 };
                }
            }
        },
    )?;
    let l = net.depth() as f64;
    let mut out = Vec::with_capacity(k);
    for (si, sigma) in sigmas.iter().enumerate() {
        for (bi, beta) in betas.iter().enumerate() {
            let e = est[si * betas.len() + bi];
            let upper = e.mean + 3.0 * e.std_error;
            let rhs = 2.0 * l.ln()
                + 2.0 * l * log_growth(net)
                + df / 3.0 * ((1.0 + beta).ln() - beta)
                + (df.powi(3) * (6.0 + 4.0 * beta + sigma) / (4.0 * sigma)).ln();
            out.push(BoundReport::new(
                "realization_tail",
                params(&[("d", df), ("beta", *beta), ("sigma", *sigma), ("samples", samples as f64)]),
                upper.ln(),
                rhs,
                Scale::Log,
            ));
        }
    }
    Ok(out)
}

/// For unit vectors `f, g`: `‖αf - g‖² ≥ 1 - Σ|f_i g_i|`.
pub fn cs_like(f: &[f64], g: &[f64], alpha: f64) -> Result<BoundReport> {
    if f.len() != g.len() || f.is_empty() {
        return Err(shape("cs_like needs vectors of equal positive length"));
    }
    let unit = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-9;
    if !unit(f) || !unit(g) {
        return Err(domain("cs_like needs unit vectors"));
    }
    let lhs = 1.0 - f.iter().zip(g).map(|(a, b)| (a * b).abs()).sum::<f64>();
    let rhs = f.iter().zip(g).map(|(a, b)| (alpha * a - b).powi(2)).sum();
    Ok(BoundReport::new("cs_like", params(&[("n", f.len() as f64), ("alpha", alpha)]), lhs, rhs, Scale::Linear))
}
