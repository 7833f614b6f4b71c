//! Scalar-parameter entries of the bound catalog. Every report is phrased
//! as `lhs <= rhs`; lower bounds are stated with the sides swapped.

use super::gaussian::{log_gauss_head_1d, log_gauss_tail_1d, radial_gaussian_integral, radial_log_mass};
use super::{params, BoundReport, Params, Scale};
use crate::constructions::{target_net, target_net_for_eps, target_psi};
use crate::error::{domain, Error, Result};
use crate::measures::{l2_error_separable, log_normalization_const};
use crate::quadrature::{integrate, Tolerance};
use crate::special::{ln_gamma_pos, log1m_exp, log_add, log_factorial};

use std::f64::consts::{LN_2, PI};

/// Catalog families reachable through [`check_bound`], with their parameters.
pub const CATALOG: &[(&str, &str)] = &[
    ("stirling", "n"),
    ("gamma_stirling", "m"),
    ("gauss_tail_1d", "sigma,s"),
    ("gauss_tail_dd", "d,sigma,s"),
    ("bernoulli", "alpha,x"),
    ("tail_exp", "d,sigma,s"),
    ("segment", "d,beta,sigma"),
    ("weighted_tail", "d,beta,sigma,k"),
    ("beta_identity", "x,y"),
    ("gamma_closed_form", "d"),
    ("tail_lower_klenke", "s"),
    ("tail_lower", "sigma,s"),
    ("small_facts", "d"),
    ("norm_bracket", "d"),
    ("main2_error", "d,M,R"),
    ("main3_eps", "d,eps"),
    ("cor_main_floor", "d,L"),
];

fn get(p: &Params, key: &str) -> Result<f64> {
    p.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parameter(format!("missing parameter '{key}'")))
}

fn get_int(p: &Params, key: &str, min: u64) -> Result<u64> {
    let v = get(p, key)?;
    if v.fract() != 0.0 || v < min as f64 || v > 1e15 {
        return Err(domain(format!("{key} must be an integer >= {min}, got {v}")));
    }
    Ok(v as u64)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(domain(format!("{name} must be positive, got {v}")))
    }
}

/// Evaluates every inequality of the named family at `p`.
pub fn check_bound(name: &str, p: &Params) -> Result<Vec<BoundReport>> {
    match name {
        "stirling" => stirling(get_int(p, "n", 1)?),
        "gamma_stirling" => gamma_stirling(get_int(p, "m", 2)?),
        "gauss_tail_1d" => gauss_tail_1d(get(p, "sigma")?, get(p, "s")?),
        "gauss_tail_dd" => gauss_tail_dd(get_int(p, "d", 1)? as usize, get(p, "sigma")?, get(p, "s")?),
        "bernoulli" => bernoulli(get(p, "alpha")?, get(p, "x")?).map(|r| vec![r]),
        "tail_exp" => tail_exp(get_int(p, "d", 1)? as usize, get(p, "sigma")?, get(p, "s")?).map(|r| vec![r]),
        "segment" => segment(get_int(p, "d", 3)? as usize, get(p, "beta")?, get(p, "sigma")?).map(|r| vec![r]),
        "weighted_tail" => weighted_tail(
            get_int(p, "d", 3)? as usize,
            get(p, "beta")?,
            get(p, "sigma")?,
            get_int(p, "k", 0)? as u32,
        )
        .map(|r| vec![r]),
        "beta_identity" => beta_identity(get(p, "x")?, get(p, "y")?).map(|r| vec![r]),
        "gamma_closed_form" => gamma_closed_form(get_int(p, "d", 1)?).map(|r| vec![r]),
        "tail_lower_klenke" => tail_lower_klenke(get(p, "s")?).map(|r| vec![r]),
        "tail_lower" => tail_lower(get(p, "sigma")?, get(p, "s")?).map(|r| vec![r]),
        "small_facts" => Ok(vec![small_facts(get_int(p, "d", 1)?)]),
        "norm_bracket" => norm_bracket(get_int(p, "d", 1)? as usize),
        "main2_error" => main2_error(get_int(p, "d", 1)? as usize, get_int(p, "M", 2)? as u32, get(p, "R")?),
        "main3_eps" => main3_eps(get_int(p, "d", 1)? as usize, get(p, "eps")?),
        "cor_main_floor" => {
            let (d, l) = (get_int(p, "d", 4)? as usize, get_int(p, "L", 1)? as usize);
            let floor = super::cor_main_floor(d, l)?;
            Ok(vec![BoundReport::new("cor_main_floor", params(&[("d", d as f64), ("L", l as f64)]), floor, floor, Scale::Log)])
        }
        other => Err(Error::Parameter(format!("unknown bound '{other}'"))),
    }
}

/// `√(2πn)(n/e)^n e^{1/(12n+1)} < n! < √(2πn)(n/e)^n e^{1/(12n)}`.
pub fn stirling(n: u64) -> Result<Vec<BoundReport>> {
    if n == 0 {
        return Err(domain("stirling needs n >= 1"));
    }
    let nf = n as f64;
    let base = 0.5 * (2.0 * PI * nf).ln() + nf * (nf.ln() - 1.0);
    let lf = log_factorial(n);
    let ps = params(&[("n", nf)]);
    Ok(vec![
        BoundReport::new("stirling.lower", ps.clone(), base + 1.0 / (12.0 * nf + 1.0), lf, Scale::Log),
        BoundReport::new("stirling.upper", ps, lf, base + 1.0 / (12.0 * nf), Scale::Log),
    ])
}

/// Both items of the Gamma–Stirling corollary at integer `m >= 2`.
pub fn gamma_stirling(m: u64) -> Result<Vec<BoundReport>> {
    if m < 2 {
        return Err(domain("gamma_stirling needs m >= 2"));
    }
    let k = (m - 1) as f64;
    let pow = k * (k.ln() - 1.0);
    let g = ln_gamma_pos(m as f64);
    let gh = ln_gamma_pos(m as f64 - 0.5);
    let ps = params(&[("m", m as f64)]);
    Ok(vec![
        BoundReport::new("gamma_stirling.i.lower", ps.clone(), 0.5 * (2.0 * PI * k).ln() + pow, g, Scale::Log),
        BoundReport::new("gamma_stirling.i.upper", ps.clone(), g, 0.5 * (3.0 * PI * k).ln() + pow, Scale::Log),
        BoundReport::new("gamma_stirling.ii.lower", ps.clone(), 0.5 * PI.ln() + pow, gh, Scale::Log),
        BoundReport::new("gamma_stirling.ii.upper", ps, gh, 0.5 * (2.0 * PI).ln() + pow, Scale::Log),
    ])
}

/// `∫_s^∞ e^{-σx²} ≤ (√π/(2√σ)) e^{-σs²}` and
/// `∫_0^s e^{-σx²} ≥ (√π/(2√σ))(1 - e^{-σs²})`.
pub fn gauss_tail_1d(sigma: f64, s: f64) -> Result<Vec<BoundReport>> {
    positive("σ", sigma)?;
    positive("s", s)?;
    let half = 0.5 * PI.ln() - LN_2 - 0.5 * sigma.ln();
    let ps = params(&[("sigma", sigma), ("s", s)]);
    Ok(vec![
        BoundReport::new("gauss_tail_1d.tail", ps.clone(), log_gauss_tail_1d(sigma, s)?, half - sigma * s * s, Scale::Log),
        BoundReport::new(
            "gauss_tail_1d.head",
            ps,
            half + log1m_exp(-sigma * s * s),
            log_gauss_head_1d(sigma, s)?,
            Scale::Log,
        ),
    ])
}

/// Ball and complement bounds in `R^d`, normalized by `(π/σ)^{d/2}`.
pub fn gauss_tail_dd(d: usize, sigma: f64, s: f64) -> Result<Vec<BoundReport>> {
    positive("σ", sigma)?;
    positive("s", s)?;
    if d == 0 {
        return Err(domain("gauss_tail_dd needs d >= 1"));
    }
    let df = d as f64;
    let log_inner = df * log1m_exp(-sigma * s * s / df); // log (1 - e^{-σs²/d})^d
    let ps = params(&[("d", df), ("sigma", sigma), ("s", s)]);
    Ok(vec![
        BoundReport::new(
            "gauss_tail_dd.ball",
            ps.clone(),
            log_inner,
            radial_log_mass(d, sigma, 0.0, 0.0, Some(s))?,
            Scale::Log,
        ),
        BoundReport::new(
            "gauss_tail_dd.tail",
            ps,
            radial_gaussian_integral(d, sigma, 0.0, s)?,
            log1m_exp(log_inner),
            Scale::Log,
        ),
    ])
}

/// `(1+x)^α ≥ 1 + αx` for `α ∉ (0,1)`, `x > -1`.
pub fn bernoulli(alpha: f64, x: f64) -> Result<BoundReport> {
    if alpha > 0.0 && alpha < 1.0 {
        return Err(domain(format!("bernoulli needs α outside (0,1), got {alpha}")));
    }
    if !(x > -1.0) {
        return Err(domain(format!("bernoulli needs x > -1, got {x}")));
    }
    Ok(BoundReport::new(
        "bernoulli",
        params(&[("alpha", alpha), ("x", x)]),
        1.0 + alpha * x,
        (1.0 + x).powf(alpha),
        Scale::Linear,
    ))
}

/// `∫_{‖y‖≥s} (σ/π)^{d/2} e^{-σ‖x‖²} ≤ d e^{-σs²/d}`.
pub fn tail_exp(d: usize, sigma: f64, s: f64) -> Result<BoundReport> {
    positive("σ", sigma)?;
    positive("s", s)?;
    let df = d as f64;
    Ok(BoundReport::new(
        "tail_exp",
        params(&[("d", df), ("sigma", sigma), ("s", s)]),
        radial_gaussian_integral(d, sigma, 0.0, s)?,
        df.ln() - sigma * s * s / df,
        Scale::Log,
    ))
}

fn check_d3(d: usize, beta: f64, sigma: f64) -> Result<()> {
    if d < 3 {
        return Err(domain(format!("requires d >= 3, got {d}")));
    }
    positive("β", beta)?;
    positive("σ", sigma)?;
    Ok(())
}

/// Annulus `√(d(1+β))/√(2σ) ≤ ‖y‖ ≤ d√(1+β)/√(2σ)` has mass `≤ d((1+β)/e^β)^{d/2}`.
pub fn segment(d: usize, beta: f64, sigma: f64) -> Result<BoundReport> {
    check_d3(d, beta, sigma)?;
    let df = d as f64;
    let unit = ((1.0 + beta) / (2.0 * sigma)).sqrt();
    let lhs = radial_log_mass(d, sigma, 0.0, df.sqrt() * unit, Some(df * unit))?;
    Ok(BoundReport::new(
        "segment",
        params(&[("d", df), ("beta", beta), ("sigma", sigma)]),
        lhs,
        df.ln() + 0.5 * df * ((1.0 + beta).ln() - beta),
        Scale::Log,
    ))
}

/// Tail of `‖x‖^k` beyond `√(d(1+β))/√(2σ)`.
pub fn weighted_tail(d: usize, beta: f64, sigma: f64, k: u32) -> Result<BoundReport> {
    check_d3(d, beta, sigma)?;
    let (df, kf) = (d as f64, k as f64);
    let r0 = (df * (1.0 + beta) / (2.0 * sigma)).sqrt();
    let lhs = radial_gaussian_integral(d, sigma, kf, r0)?;
    let a = (1.0 + kf) * df.ln()
        + 0.5 * kf * ((1.0 + beta).ln() - (2.0 * sigma).ln())
        + 0.5 * df * ((1.0 + beta).ln() - beta);
    let b = ln_gamma_pos(0.5 * (df + kf)) - ln_gamma_pos(0.5 * df) + (df + kf).ln() - 0.5 * kf * sigma.ln()
        - df * df * (1.0 + beta) / (2.0 * (df + kf));
    Ok(BoundReport::new(
        "weighted_tail",
        params(&[("d", df), ("beta", beta), ("sigma", sigma), ("k", kf)]),
        lhs,
        log_add(a, b),
        Scale::Log,
    ))
}

/// `B(x,y) = Γ(x)Γ(y)/Γ(x+y)`: quadrature against log-gamma. The report
/// compares the relative discrepancy with `1e-8`.
pub fn beta_identity(x: f64, y: f64) -> Result<BoundReport> {
    positive("x", x)?;
    positive("y", y)?;
    let tol = Tolerance { abs: 1e-300, rel: 1e-12, max_intervals: 8000 };
    // Split at 1/2 and take t = u^{1/x} near 0 (and the mirror near 1) so the
    // endpoint powers disappear.
    let half = |x: f64, y: f64| -> Result<f64> {
        let top = 0.5f64.powf(x);
        Ok(integrate(|u| (1.0 - u.powf(1.0 / x)).powf(y - 1.0), 0.0, top, tol)?.value / x)
    };
    let q = half(x, y)? + half(y, x)?;
    let closed = ln_gamma_pos(x) + ln_gamma_pos(y) - ln_gamma_pos(x + y);
    Ok(BoundReport::new(
        "beta_identity",
        params(&[("x", x), ("y", y)]),
        (q.ln() - closed).abs(),
        1e-8,
        Scale::Linear,
    ))
}

/// `Γ(d/2)` against `(d/2-1)!` or `(d-1)!√π/(((d-1)/2)! 2^{d-1})`.
pub fn gamma_closed_form(d: u64) -> Result<BoundReport> {
    if d == 0 {
        return Err(domain("gamma_closed_form needs d >= 1"));
    }
    let closed = if d.is_multiple_of(2) {
        log_factorial(d / 2 - 1)
    } else {
        log_factorial(d - 1) + 0.5 * PI.ln() - log_factorial((d - 1) / 2) - (d - 1) as f64 * LN_2
    };
    let lg = ln_gamma_pos(d as f64 / 2.0);
    Ok(BoundReport::new(
        "gamma_closed_form",
        params(&[("d", d as f64)]),
        (lg - closed).abs(),
        1e-12 * closed.abs().max(1.0),
        Scale::Linear,
    ))
}

/// `∫_s^∞ e^{-x²/2} ≥ e^{-s²/2}/(s + 1/s)`.
pub fn tail_lower_klenke(s: f64) -> Result<BoundReport> {
    positive("s", s)?;
    Ok(BoundReport::new(
        "tail_lower_klenke",
        params(&[("s", s)]),
        -0.5 * s * s - (s + 1.0 / s).ln(),
        log_gauss_tail_1d(0.5, s)?,
        Scale::Log,
    ))
}

/// `∫_s^∞ e^{-σx²} ≥ e^{-σs²}/(1/s + 2σs)`.
pub fn tail_lower(sigma: f64, s: f64) -> Result<BoundReport> {
    positive("σ", sigma)?;
    positive("s", s)?;
    Ok(BoundReport::new(
        "tail_lower",
        params(&[("sigma", sigma), ("s", s)]),
        -sigma * s * s - (1.0 / s + 2.0 * sigma * s).ln(),
        log_gauss_tail_1d(sigma, s)?,
        Scale::Log,
    ))
}

/// `√(2d)(2d+1)/(4d²(4d²+6d+1)) (2/π)^{1/2} e^{-1-1/(4d)} ≥ d^{-5/2}/50`.
pub fn small_facts(d: u64) -> BoundReport {
    let df = d as f64;
    let lhs = 0.5 * (2.0 * df).ln() + (2.0 * df + 1.0).ln()
        - (4.0 * df * df * (4.0 * df * df + 6.0 * df + 1.0)).ln()
        + 0.5 * (2.0 / PI).ln()
        - 1.0
        - 1.0 / (4.0 * df);
    BoundReport::new("small_facts", params(&[("d", df)]), -(50f64.ln()) - 2.5 * df.ln(), lhs, Scale::Log)
}

/// `d^{-3/2} e^{-d}/50 ≤ c_d ≤ 3 d² e^{-d}`.
pub fn norm_bracket(d: usize) -> Result<Vec<BoundReport>> {
    let df = d as f64;
    let lc = log_normalization_const(d)?;
    let ps = params(&[("d", df)]);
    Ok(vec![
        BoundReport::new("norm_bracket.lower", ps.clone(), -(50f64.ln()) - 1.5 * df.ln() - df, lc, Scale::Log),
        BoundReport::new("norm_bracket.upper", ps, lc, 3f64.ln() + 2.0 * df.ln() - df, Scale::Log),
    ])
}

/// Error and architecture bounds of the deep approximator.
pub fn main2_error(d: usize, m: u32, r: f64) -> Result<Vec<BoundReport>> {
    if !(r >= 1.0) {
        return Err(domain(format!("R must be >= 1, got {r}")));
    }
    let (net, spec) = target_net(d, m, r)?;
    let psi = target_psi(&spec)?;
    let err = l2_error_separable(&psi, spec.scale(), d)?.value;
    let (df, mf) = (d as f64, m as f64);
    let bound = 50.0 * df.powf(3.5) * (16f64.powi(-(m as i32) - 1) * r.powi(4) + 105.0 * r.powi(-4));
    let ps = params(&[("d", df), ("M", mf), ("R", r)]);
    Ok(vec![
        BoundReport::new("main2_error.l2_sq", ps.clone(), err * err, bound, Scale::Linear),
        BoundReport::new(
            "main2_error.hidden",
            ps.clone(),
            net.hidden_layers() as f64,
            (d + m as usize + 1) as f64,
            Scale::Linear,
        ),
        BoundReport::new(
            "main2_error.params",
            ps.clone(),
            net.param_count() as f64,
            42.0 * df * df * mf + 6.0 * df,
            Scale::Linear,
        ),
        BoundReport::new(
            "main2_error.inf_norm",
            ps,
            net.inf_norm(),
            12.0 * df.powf(1.5) * (r * r).max(4.0),
            Scale::Linear,
        ),
    ])
}

/// Error, depth and size of the ε-parameterized approximator.
pub fn main3_eps(d: usize, eps: f64) -> Result<Vec<BoundReport>> {
    let (net, spec) = target_net_for_eps(d, eps)?;
    let psi = target_psi(&spec)?;
    let err = l2_error_separable(&psi, spec.scale(), d)?.value;
    let df = d as f64;
    let h = net.hidden_layers() as f64;
    let ps = params(&[("d", df), ("eps", eps)]);
    Ok(vec![
        BoundReport::new("main3_eps.l2", ps.clone(), err, eps, Scale::Linear),
        BoundReport::new("main3_eps.hidden_lower", ps.clone(), df, h, Scale::Linear),
        BoundReport::new("main3_eps.hidden_upper", ps.clone(), h, 11.0 * df / eps.sqrt(), Scale::Linear),
        BoundReport::new(
            "main3_eps.params",
            ps,
            net.param_count() as f64,
            384.0 * df.powi(3) / eps.sqrt(),
            Scale::Linear,
        ),
    ])
}
