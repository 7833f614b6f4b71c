//! Numeric certification of the inequalities behind the construction:
//! a catalog of named checks, the lower-bound certificate, and the
//! deep-versus-shallow comparison table.

mod catalog;
mod certificate;
mod gaussian;
mod network;
mod suite;
mod table;

pub use catalog::{check_bound, CATALOG};
pub use certificate::{cor_main_check, cor_main_floor, main1_certificate, CertificateInput};
pub use gaussian::{log_gauss_tail_1d, radial_gaussian_integral, radial_log_mass};
pub use network::{apriori_realization, cs_like, matrix_norm, realization_tail};
pub use suite::{run_suite, Suite};
pub use table::{shallow_deep_table, ShallowDeepTable, TableRow};

use std::fmt;

/// Whether `lhs`/`rhs` are plain values or natural logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl Scale {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scale::Linear => "linear",
            Scale::Log => "log",
        }
    }
}

/// Ordered parameter list of a check.
pub type Params = Vec<(String, f64)>;

pub fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub params: Params,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub scale: Scale,
}

/// Relative slack granted in favour of the inequality.
pub const PASS_TOL: f64 = 1e-9;

impl BoundReport {
    pub fn new(name: impl Into<String>, params: Params, lhs: f64, rhs: f64, scale: Scale) -> Self {
        let pass = passes(lhs, rhs);
        let slack = if lhs == rhs { 0.0 } else { rhs - lhs };
        Self { name: name.into(), params, lhs, rhs, slack, pass, scale }
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub const HEADER: &'static str = "name\tparams\tscale\tlhs\trhs\tslack\tpass";
}

/// `lhs <= rhs + 1e-9·max(1, |rhs|)`; NaN never passes.
pub fn passes(lhs: f64, rhs: f64) -> bool {
    if lhs.is_nan() || rhs.is_nan() {
        return false;
    }
    if lhs == f64::NEG_INFINITY || rhs == f64::INFINITY {
        return true;
    }
    lhs <= rhs + PASS_TOL * rhs.abs().max(1.0)
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(
            f,
            "{}\t{}\t{}\t{:e}\t{:e}\t{:e}\t{}",
            self.name,
            if ps.is_empty() { "-".to_string() } else { ps.join(",") },
            self.scale.as_str(),
            self.lhs,
            self.rhs,
            self.slack,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule() {
        assert!(passes(1.0, 1.0));
        assert!(passes(1.0 + 5e-10, 1.0));
        assert!(!passes(1.0 + 2e-9, 1.0));
        assert!(passes(1e6 + 1e-4, 1e6));
        assert!(passes(f64::NEG_INFINITY, -1e300));
        assert!(!passes(f64::NAN, 0.0));
    }

    #[test]
    fn record_format() {
        let r = BoundReport::new("demo", params(&[("d", 3.0), ("beta", 0.5)]), 1.0, 2.0, Scale::Log);
        assert_eq!(r.to_string(), "demo\td=3,beta=0.5\tlog\t1e0\t2e0\t1e0\tpass");
        assert_eq!(r.param("beta"), Some(0.5));
    }
}
