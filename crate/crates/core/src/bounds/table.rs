//! Deep budget `c d³` against the shallow floor `(1 + c^{-3})^{d^δ}`, both as
//! logarithms.

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub d: u64,
    pub deep_budget_log: f64,
    pub shallow_floor_log: f64,
    pub shallow_exceeds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShallowDeepTable {
    pub c: f64,
    pub delta: f64,
    pub rows: Vec<TableRow>,
    /// Smallest `d*` with shallow floor above the deep budget for every `d ≥ d*`.
    pub crossover: Option<u64>,
    /// Violated preconditions on `(c, δ)`; the table is still computed.
    pub warnings: Vec<String>,
}

fn deep_log(c: f64, d: f64) -> f64 {
    c.ln() + 3.0 * d.ln()
}

fn shallow_log(k: f64, delta: f64, d: f64) -> f64 {
    d.powf(delta) * k
}

pub fn shallow_deep_table(c: f64, delta: f64, d_values: &[u64]) -> Result<ShallowDeepTable> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain(format!("c must be positive and finite, got {c}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain(format!("δ must lie in (0,1], got {delta}")));
    }
    if d_values.contains(&0) {
        return Err(domain("d values must be >= 1"));
    }
    let ln103 = 1.03f64.ln();
    let mut warnings = Vec::new();
    let threshold = 100.0 / (delta * ln103).powi(2);
    if c < threshold {
        warnings.push(format!("c = {c} is below 100(δ ln 1.03)^-2 = {threshold:.6}"));
    }
    let lhs = std::f64::consts::LN_2 + 5.0 / delta * c.ln();
    let rhs = c.sqrt() * ln103;
    if lhs > rhs {
        warnings.push(format!(
            "2c^(5/δ) <= 1.03^sqrt(c) fails: log-sides {lhs:.6} > {rhs:.6}"
        ));
    }
    // log(1 + c^{-3}) without forming c^3.
    let k = (-3.0 * c.ln()).exp().ln_1p();
    let rows = d_values
        .iter()
        .map(|&d| {
            let df = d as f64;
            let (dl, sl) = (deep_log(c, df), shallow_log(k, delta, df));
            TableRow { d, deep_budget_log: dl, shallow_floor_log: sl, shallow_exceeds: sl > dl }
        })
        .collect();
    Ok(ShallowDeepTable { c, delta, rows, crossover: crossover(c, delta, k), warnings })
}

/// `h(d) = k d^δ - log c - 3 log d` falls until `d_m = (3/(δk))^{1/δ}` and
/// rises after, so the last sign change is found by doubling from `d_m` and
/// bisecting.
fn crossover(c: f64, delta: f64, k: f64) -> Option<u64> {
    let h = |d: u64| shallow_log(k, delta, d as f64) - deep_log(c, d as f64);
    let dm = (3.0 / (delta * k)).powf(1.0 / delta);
    if !(dm.is_finite()) || dm >= 4e18 {
        return None;
    }
    let start = (dm.floor() as u64).max(1);
    if h(start) > 0.0 {
        return Some(1);
    }
    let (mut lo, mut hi) = (start, start);
    while h(hi) <= 0.0 {
        lo = hi;
        hi = hi.checked_mul(2)?;
        if hi > (1u64 << 62) {
            return None;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if h(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
