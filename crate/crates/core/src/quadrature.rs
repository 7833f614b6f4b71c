//! One-dimensional quadrature: probabilist Gauss–Hermite rules and adaptive
//! Gauss–Kronrod (7/15) on finite and semi-infinite intervals.

use crate::error::{param, Error, Result};

/// Kind of a [`QuadratureRule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    GaussHermite,
    Adaptive,
}

/// Rule for integrals against the standard normal density. Gauss–Hermite
/// rules carry nodes and weights summing to one; the adaptive kind integrates
/// with Gauss–Kronrod, splitting at `breaks`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub breaks: Vec<f64>,
    pub tol: Tolerance,
}

impl QuadratureRule {
    /// Default rule for hinge-type integrands: 200-point Gauss–Hermite.
    pub fn default_hinge() -> Self {
        Self::gauss_hermite(200).expect("order 200 is valid")
    }

    pub fn gauss_hermite(order: usize) -> Result<Self> {
        let (nodes, weights) = gauss_hermite_prob(order)?;
        Ok(Self { kind: RuleKind::GaussHermite, order, nodes, weights, breaks: vec![], tol: Tolerance::default() })
    }

    /// Adaptive fallback splitting the real line at `breaks`.
    pub fn adaptive(breaks: Vec<f64>, tol: Tolerance) -> Self {
        Self { kind: RuleKind::Adaptive, order: 15, nodes: vec![], weights: vec![], breaks, tol }
    }
}

/// Nodes and weights of the `n`-point Gauss–Hermite rule for the standard
/// normal density. Weights sum to one.
pub fn gauss_hermite_prob(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(param("Gauss-Hermite order must be >= 1"));
    }
    // Nodes are the eigenvalues of the Jacobi matrix (zero diagonal,
    // off-diagonal √k), located by Sturm-count bisection.
    let below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = -x;
        for k in 0..n {
            if k > 0 {
                q = -x - k as f64 / q;
            }
            if q == 0.0 {
                q = -f64::EPSILON * (1.0 + x.abs());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bound = 2.0 * ((n as f64) - 1.0).max(0.0).sqrt() + 1.0;
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let (mut lo, mut hi) = (-bound, bound);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if below(mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        nodes.push(0.5 * (lo + hi));
    }
    // Weights from the orthonormal physicists' recurrence at z = x/√2. The
    // recurrence carries e^{-z²/2} so it stays in range for large orders.
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        let mut z = *x / std::f64::consts::SQRT_2;
        let mut log_w = 0.0;
        for _ in 0..2 {
            let (mut p1, mut p2) = (PIM4 * (-0.5 * z * z).exp(), 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            let pp = (2.0 * n as f64).sqrt() * p2;
            if !(pp.is_finite() && pp != 0.0) {
                return Err(Error::Quadrature(format!("Gauss-Hermite recurrence degenerate at {z}")));
            }
            log_w = std::f64::consts::LN_2 - z * z - 2.0 * pp.abs().ln();
            let step = p1 / pp;
            if step.abs() < 1e-3 {
                z -= step;
            }
        }
        *x = z * std::f64::consts::SQRT_2;
        weights.push(log_w.exp() / sqrt_pi);
    }
    // Symmetrize.
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// Absolute and relative accuracy targets plus a subdivision budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-300, rel: 1e-11, max_intervals: 4000 }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_err: f64,
    pub intervals: usize,
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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod on `[a, b]`, bisecting the worst interval.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(param("integrate needs finite limits"));
    }
    if a == b {
        return Ok(Integral { value: 0.0, abs_err: 0.0, intervals: 0 });
    }
    if a > b {
        let r = integrate(f, b, a, tol)?;
        return Ok(Integral { value: -r.value, ..r });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let (mut total, mut err) = (v, e);
    loop {
        if !total.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= tol.abs.max(tol.rel * total.abs()) {
            break;
        }
        if parts.len() >= tol.max_intervals {
            return Err(Error::Quadrature(format!(
                "no convergence on [{a}, {b}] after {} intervals: value {total:e}, error estimate {err:e}",
                parts.len()
            )));
        }
        let worst = (0..parts.len()).max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3)).unwrap_or(0);
        let (lo, hi, pv, pe) = parts[worst];
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval below resolution; accept what we have.
            parts[worst].3 = 0.0;
            err -= pe;
            continue;
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts[worst] = (lo, mid, v1, e1);
        parts.push((mid, hi, v2, e2));
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        if parts.len() % 64 == 0 {
            // Refresh running sums to keep cancellation from drifting.
            total = parts.iter().map(|p| p.2).sum();
            err = parts.iter().map(|p| p.3).sum();
        }
    }
    let value = parts.iter().map(|p| p.2).sum();
    let abs_err = parts.iter().map(|p| p.3).sum();
    Ok(Integral { value, abs_err, intervals: parts.len() })
}

/// `∫_a^∞ f` through `x = a + (1-t)/t`.
pub fn integrate_to_infinity(mut f: impl FnMut(f64) -> f64, a: f64, tol: Tolerance) -> Result<Integral> {
    integrate(
        |t| {
            let x = a + (1.0 - t) / t;
            if x.is_finite() {
                f(x) / (t * t)
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫_ℝ f`, split at the sorted `breaks`.
pub fn integrate_line(mut f: impl FnMut(f64) -> f64, breaks: &[f64], tol: Tolerance) -> Result<Integral> {
    let mut b: Vec<f64> = breaks.iter().copied().filter(|v| v.is_finite()).collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    if b.is_empty() {
        b.push(0.0);
    }
    let mut acc = Integral { value: 0.0, abs_err: 0.0, intervals: 0 };
    let mut add = |r: Integral| {
        acc.value += r.value;
        acc.abs_err += r.abs_err;
        acc.intervals += r.intervals;
    };
    add(integrate_to_infinity(|x| f(-x), -b[0], tol)?);
    for w in b.windows(2) {
        add(integrate(&mut f, w[0], w[1], tol)?);
    }
    add(integrate_to_infinity(&mut f, b[b.len() - 1], tol)?);
    Ok(acc)
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// `∫ f dφ₁` with the given rule.
pub fn gh_integrate(f: impl Fn(f64) -> f64, rule: &QuadratureRule) -> Result<f64> {
    let v = match rule.kind {
        RuleKind::GaussHermite => rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * f(*x)).sum(),
        RuleKind::Adaptive => integrate_line(|x| f(x) * std_normal_pdf(x), &rule.breaks, rule.tol)?.value,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Quadrature("non-finite integral".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules() {
        let (x, w) = gauss_hermite_prob(2).unwrap();
        assert!((x[1] - 1.0).abs() < 1e-14 && (x[0] + 1.0).abs() < 1e-14);
        assert!((w[0] - 0.5).abs() < 1e-14);
        let (x, w) = gauss_hermite_prob(3).unwrap();
        assert!((x[2] - 3f64.sqrt()).abs() < 1e-14);
        assert!((w[1] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 5, 40, 200] {
            let (_, w) = gauss_hermite_prob(n).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn kronrod_basics() {
        let r = integrate(f64::sin, 0.0, std::f64::consts::PI, Tolerance::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = integrate(|x| x.abs(), -1.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - 2.5).abs() < 1e-10);
        let r = integrate_to_infinity(|x| (-x).exp(), 1.0, Tolerance::default()).unwrap();
        assert!((r.value - (-1f64).exp()).abs() < 1e-13);
        let r = integrate_line(std_normal_pdf, &[-1.0, 2.0], Tolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }
}
