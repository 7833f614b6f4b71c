//! Default-grid runner behind `verify`.

use std::cmp::Ordering;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::catalog::*;
use super::certificate::{cor_main_check, main1_certificate, CertificateInput};
use super::network::{apriori_realization, cs_like, matrix_norm, realization_tail};
use super::BoundReport;
use crate::ann::{random_network, Matrix};
use crate::constructions::{target_net_for_eps, target_psi};
use crate::error::{Error, Result};
use crate::measures::{l2_error_separable, l2_norm_sq_separable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Section3,
    Section4,
    Section5,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "section3" => Ok(Suite::Section3),
            "section4" => Ok(Suite::Section4),
            "section5" => Ok(Suite::Section5),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parameter(format!("unknown suite '{s}' (section3|section4|section5|all)"))),
        }
    }
}

const BETAS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
const SIGMAS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
const KS: [u32; 3] = [0, 1, 2];
const D3: std::ops::RangeInclusive<usize> = 3..=20;
const D4: std::ops::RangeInclusive<usize> = 4..=20;

/// Samples per network in the realization-tail check.
pub const TAIL_SAMPLES: u64 = 1_000_000;
const SEED: u64 = 0x5eed;

fn s_grid(d: usize) -> [f64; 4] {
    let df = d as f64;
    [0.5, 1.0, df.sqrt(), df]
}

/// Every `s` appearing in `s_grid(d)` for `d ∈ D3`, deduplicated.
fn s_union() -> Vec<f64> {
    let mut v: Vec<f64> = D3.flat_map(s_grid).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

type Job = Box<dyn Fn() -> Result<Vec<BoundReport>> + Send + Sync>;

fn one(r: Result<BoundReport>) -> Result<Vec<BoundReport>> {
    r.map(|r| vec![r])
}

fn section3(jobs: &mut Vec<Job>) {
    for n in 1..=60 {
        jobs.push(Box::new(move || stirling(n)));
    }
    for m in 2..=40 {
        jobs.push(Box::new(move || gamma_stirling(m)));
    }
    for s in s_union() {
        for sigma in SIGMAS {
            jobs.push(Box::new(move || gauss_tail_1d(sigma, s)));
        }
    }
    for d in D3 {
        for sigma in SIGMAS {
            for s in s_grid(d) {
                jobs.push(Box::new(move || gauss_tail_dd(d, sigma, s)));
                jobs.push(Box::new(move || one(tail_exp(d, sigma, s))));
            }
        }
    }
    for alpha in [-3.0, -1.0, -0.5, 0.0, 1.0, 1.5, 2.0, 3.0, 7.5] {
        for x in [-0.99, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 3.0, 10.0] {
            jobs.push(Box::new(move || one(bernoulli(alpha, x))));
        }
    }
    for d in D3 {
        for beta in BETAS {
            for sigma in SIGMAS {
                jobs.push(Box::new(move || one(segment(d, beta, sigma))));
                for k in KS {
                    jobs.push(Box::new(move || one(weighted_tail(d, beta, sigma, k))));
                }
            }
        }
    }
    let xs = [0.5, 1.0, 1.5, 2.0, 3.5];
    for x in xs {
        for y in xs {
            jobs.push(Box::new(move || one(beta_identity(x, y))));
        }
    }
    for d in 1..=24 {
        jobs.push(Box::new(move || one(gamma_closed_form(d))));
    }
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Certificate inputs for the ε-network in dimension `d` with `σ = 1/2`, so
/// the weight is the standard Gaussian. For `β ≤ 1` the ball of radius
/// `√(d(1+β))` lies inside the cube `|x_j| ≤ √(2d)` where the target
/// vanishes, so its mass there is exactly zero.
fn certificate_reports(d: usize, eps: f64) -> Result<Vec<BoundReport>> {
    let (net, spec) = target_net_for_eps(d, eps)?;
    let psi = target_psi(&spec)?;
    let err = l2_error_separable(&psi, spec.scale(), d)?.value;
    let norm_sq = l2_norm_sq_separable(&psi, spec.scale(), d)?;
    let mut out = Vec::new();
    for beta in BETAS.into_iter().filter(|b| *b <= 1.0) {
        let mut input = CertificateInput::for_network(&net, beta, 0.5);
        input.realization_l2 = norm_sq.sqrt();
        input.approx_error_sq = err * err;
        out.push(main1_certificate(&input)?);
    }
    out.push(cor_main_check(&net, err * err)?);
    Ok(out)
}

fn section4(jobs: &mut Vec<Job>) {
    jobs.push(Box::new(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut out = Vec::new();
        for _ in 0..200 {
            let (m, n) = (rng.random_range(1..=6usize), rng.random_range(1..=6usize));
            let a = Matrix::new(m, n, (0..m * n).map(|_| rng.random_range(-2.0..=2.0)).collect())?;
            let b: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..=2.0)).collect();
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..=5.0)).collect();
            out.extend(matrix_norm(&a, &b, &x)?);
        }
        Ok(out)
    }));
    jobs.push(Box::new(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
        let mut out = Vec::new();
        for _ in 0..200 {
            let net = random_network(&mut rng, None, None);
            for _ in 0..20 {
                let x: Vec<f64> = (0..net.input_dim()).map(|_| rng.random_range(-5.0..=5.0)).collect();
                out.push(apriori_realization(&net, &x)?);
            }
        }
        Ok(out)
    }));
    for d in D4 {
        jobs.push(Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + 100 + d as u64);
            let net = random_network(&mut rng, Some(d), Some(1));
            realization_tail(&net, &BETAS, &SIGMAS, TAIL_SAMPLES, SEED + d as u64)
        }));
    }
    jobs.push(Box::new(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
        let mut out = Vec::new();
        for _ in 0..1000 {
            let n = rng.random_range(1..=10usize);
            let f = unit_vector(&mut rng, n);
            let g = unit_vector(&mut rng, n);
            for alpha in [-2.0, 0.0, 0.5, 1.0, 3.0] {
                out.push(cs_like(&f, &g, alpha)?);
            }
        }
        Ok(out)
    }));
    for d in 4..=6 {
        jobs.push(Box::new(move || certificate_reports(d, 0.25)));
    }
}

fn section5(jobs: &mut Vec<Job>) {
    for s in s_union() {
        jobs.push(Box::new(move || one(tail_lower_klenke(s))));
        for sigma in SIGMAS {
            jobs.push(Box::new(move || one(tail_lower(sigma, s))));
        }
    }
    for d in 1..=200 {
        jobs.push(Box::new(move || Ok(vec![small_facts(d)])));
    }
    for d in 1..=30 {
        jobs.push(Box::new(move || norm_bracket(d)));
    }
    for d in [3, 4, 5] {
        for m in [2, 4, 8] {
            for r in [4.0, 9.0] {
                jobs.push(Box::new(move || main2_error(d, m, r)));
            }
        }
    }
    for d in 1..=6 {
        jobs.push(Box::new(move || main3_eps(d, 0.5)));
    }
}

fn cmp_reports(a: &BoundReport, b: &BoundReport) -> Ordering {
    a.name.cmp(&b.name).then_with(|| {
        let (pa, pb) = (&a.params, &b.params);
        for ((ka, va), (kb, vb)) in pa.iter().zip(pb) {
            let o = ka.cmp(kb).then(va.total_cmp(vb));
            if o != Ordering::Equal {
                return o;
            }
        }
        pa.len().cmp(&pb.len())
    })
}

/// Runs the named suite on the default grid. Reports are sorted by name,
/// then parameters, independently of evaluation order.
pub fn run_suite(suite: Suite) -> Result<Vec<BoundReport>> {
    let mut jobs: Vec<Job> = Vec::new();
    if matches!(suite, Suite::Section3 | Suite::All) {
        section3(&mut jobs);
    }
    if matches!(suite, Suite::Section4 | Suite::All) {
        section4(&mut jobs);
    }
    if matches!(suite, Suite::Section5 | Suite::All) {
        section5(&mut jobs);
    }
    let parts: Vec<Result<Vec<BoundReport>>> = jobs.par_iter().map(|j| j()).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    // Stable sort keeps repeated parameter points (random cases) in generation order.
    out.sort_by(cmp_reports);
    Ok(out)
}
