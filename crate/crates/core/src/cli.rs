//! `depthsep` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ann::Network;
use crate::bounds::{run_suite, shallow_deep_table, BoundReport, Suite};
use crate::constructions::{hinge_square_net, scaled_square_net, square_net, target_net, target_net_for_eps};
use crate::error::Error;
use crate::json::{from_json, to_json};
use crate::measures::{l2_error_mc, l2_error_separable_fn};

#[derive(Parser, Debug)]
#[command(name = "depthsep", version, about = "Deep ReLU constructions, error measures and bound checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build a network and write it as JSON.
    Build {
        kind: Kind,
        /// Number of sawtooth levels.
        #[arg(long = "M")]
        m: Option<u32>,
        /// Range the square is fitted on.
        #[arg(long = "R")]
        r: Option<f64>,
        /// Hinge offset.
        #[arg(long)]
        a: Option<f64>,
        /// Input dimension.
        #[arg(long)]
        d: Option<usize>,
        /// Target L² accuracy.
        #[arg(long)]
        eps: Option<f64>,
        /// Output file; JSON goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a network at one input.
    Eval {
        #[arg(long)]
        net: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        input: String,
    },
    /// Print architecture statistics.
    Inspect {
        #[arg(long)]
        net: PathBuf,
    },
    /// L² error against the normalized target under the standard Gaussian.
    Error {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        method: Method,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// RNG seed; required for mc.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a bound-catalog suite; exits 2 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = Grid::Default)]
        grid: Grid,
    },
    /// Deep budget against shallow floor.
    Table {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        dmax: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Square,
    ScaledSquare,
    HingeSquare,
    Target,
    TargetEps,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Separable,
    Mc,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Section3,
    Section4,
    Section5,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Grid {
    Default,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Text,
    Csv,
}

enum Failure {
    Invalid(String),
    Bounds,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(format!("i/o error: {e}"))
    }
}

type CliResult = std::result::Result<(), Failure>;

fn need<T>(v: Option<T>, flag: &str, kind: &str) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| Failure::Invalid(format!("build {kind} requires --{flag}")))
}

fn finite(name: &str, v: f64) -> std::result::Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Invalid(format!("--{name} must be finite, got {v}")))
    }
}

fn read_net(path: &PathBuf) -> std::result::Result<Network, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(from_json(&s)?)
}

/// Runs the CLI with the given arguments (program name first) and returns
/// the exit code: 0 success, 1 invalid input, 2 a bound check failed.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`main_with_args`] with explicit output streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(()) => 0,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Bounds) => 2,
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Cmd::Build { kind, m, r, a, d, eps, out: path } => build(kind, m, r, a, d, eps, path, out),
        Cmd::Eval { net, input } => {
            let net = read_net(&net)?;
            let x = input
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    t.parse::<f64>().map_err(|_| Failure::Invalid(format!("malformed number '{t}' in --input")))
                })
                .collect::<std::result::Result<Vec<f64>, _>>()?;
            let y = net.realize(&x)?;
            let parts: Vec<String> = y.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", parts.join(","))?;
            Ok(())
        }
        Cmd::Inspect { net } => {
            let net = read_net(&net)?;
            let a = net.architecture();
            let dims: Vec<String> = a.dims.iter().map(|v| v.to_string()).collect();
            writeln!(out, "dims={}", dims.join(","))?;
            writeln!(out, "depth={}", a.depth)?;
            writeln!(out, "hidden={}", a.hidden_layers)?;
            writeln!(out, "inputs={}", a.inputs)?;
            writeln!(out, "outputs={}", a.outputs)?;
            writeln!(out, "params={}", a.params)?;
            writeln!(out, "inf_norm={}", net.inf_norm())?;
            Ok(())
        }
        Cmd::Error { net, d, method, samples, seed } => {
            let net = read_net(&net)?;
            if d == 0 {
                return Err(Failure::Invalid("--d must be >= 1".into()));
            }
            let est = match method {
                Method::Mc => {
                    let seed = seed.ok_or_else(|| Failure::Invalid("--method mc requires --seed".into()))?;
                    if samples < 2 {
                        return Err(Failure::Invalid("--samples must be >= 2".into()));
                    }
                    l2_error_mc(&net, d, samples, seed)?
                }
                Method::Separable => separable_error(&net, d)?,
            };
            writeln!(out, "{est}")?;
            Ok(())
        }
        Cmd::Verify { suite, grid: Grid::Default } => {
            let suite = match suite {
                SuiteArg::Section3 => Suite::Section3,
                SuiteArg::Section4 => Suite::Section4,
                SuiteArg::Section5 => Suite::Section5,
                SuiteArg::All => Suite::All,
            };
            let reports = run_suite(suite)?;
            writeln!(out, "{}", BoundReport::HEADER)?;
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            writeln!(err, "{} checks, {} failed", reports.len(), failed)?;
            if failed > 0 {
                Err(Failure::Bounds)
            } else {
                Ok(())
            }
        }
        Cmd::Table { c, delta, dmax, format } => table(finite("c", c)?, finite("delta", delta)?, dmax, format, out, err),
    }
}

#[allow(clippy::too_many_arguments)]
fn build(
    kind: Kind,
    m: Option<u32>,
    r: Option<f64>,
    a: Option<f64>,
    d: Option<usize>,
    eps: Option<f64>,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> CliResult {
    for (name, v) in [("R", r), ("a", a), ("eps", eps)] {
        if let Some(v) = v {
            finite(name, v)?;
        }
    }
    let net = match kind {
        Kind::Square => square_net(need(m, "M", "square")?)?,
        Kind::ScaledSquare => scaled_square_net(need(m, "M", "scaled-square")?, need(r, "R", "scaled-square")?)?,
        Kind::HingeSquare => {
            hinge_square_net(need(a, "a", "hinge-square")?, need(m, "M", "hinge-square")?, need(r, "R", "hinge-square")?)?
        }
        Kind::Target => target_net(need(d, "d", "target")?, need(m, "M", "target")?, need(r, "R", "target")?)?.0,
        Kind::TargetEps => target_net_for_eps(need(d, "d", "target-eps")?, need(eps, "eps", "target-eps")?)?.0,
    };
    let json = to_json(&net);
    match path {
        Some(p) => {
            std::fs::write(&p, json + "\n")
                .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", p.display())))?;
            let dims: Vec<String> = net.dims().iter().map(|v| v.to_string()).collect();
            writeln!(out, "wrote {} dims={} params={}", p.display(), dims.join(","), net.param_count())?;
        }
        None => writeln!(out, "{json}")?,
    }
    Ok(())
}

/// Separable error for a network of the form `x ↦ Σ_j g(x_j)`. The form is
/// checked on seeded random probes before the one-dimensional profile
/// `g(t) = ℛ(t e₁) - (d-1)/d ℛ(0)` is integrated.
fn separable_error(net: &Network, d: usize) -> std::result::Result<crate::measures::ErrorEstimate, Failure> {
    if net.input_dim() != d || net.output_dim() != 1 {
        return Err(Failure::Invalid(format!(
            "network must map R^{d} to R, got {} inputs and {} outputs",
            net.input_dim(),
            net.output_dim()
        )));
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let mut e = vec![0.0; d];
    let zero = net.realize_with(&e, &mut a, &mut b)[0];
    let df = d as f64;
    let mut axis = |j: usize, t: f64, a: &mut Vec<f64>, b: &mut Vec<f64>| {
        e.fill(0.0);
        e[j] = t;
        net.realize_with(&e, a, b)[0]
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xadd);
    let mut x = vec![0.0; d];
    for _ in 0..256 {
        for v in x.iter_mut() {
            *v = rng.random_range(-6.0..=6.0);
        }
        let full = net.realize_with(&x, &mut a, &mut b)[0];
        let mut sum = -(df - 1.0) * zero;
        let mut scale = zero.abs();
        for (j, &t) in x.iter().enumerate() {
            let v = axis(j, t, &mut a, &mut b);
            let v0 = axis(0, t, &mut a, &mut b);
            scale = scale.max(v.abs());
            if (v - v0).abs() > 1e-9 * v.abs().max(1.0) {
                return Err(Failure::Invalid(
                    "network is not symmetric across coordinates; use --method mc".into(),
                ));
            }
            sum += v;
        }
        if (full - sum).abs() > 1e-9 * scale.max(full.abs()).max(1.0) * df {
            return Err(Failure::Invalid("network is not a sum of univariate terms; use --method mc".into()));
        }
    }
    let shift = (df - 1.0) / df * zero;
    let mut x1 = vec![0.0; d];
    let est = l2_error_separable_fn(
        |t| {
            x1[0] = t;
            net.realize_with(&x1, &mut a, &mut b)[0] - shift
        },
        1.0,
        d,
        &[],
    )?;
    Ok(est)
}

/// `1..=min(dmax, 20)`, then `{1, 2, 5}·10^k` up to `dmax`, then `dmax`.
fn table_grid(dmax: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=dmax.min(20)).collect();
    let mut p: u64 = 10;
    'outer: loop {
        for m in [1u64, 2, 5] {
            match p.checked_mul(m) {
                Some(x) if x <= dmax => {
                    if x > 20 {
                        v.push(x);
                    }
                }
                _ => break 'outer,
            }
        }
        match p.checked_mul(10) {
            Some(q) => p = q,
            None => break,
        }
    }
    if v.last() != Some(&dmax) {
        v.push(dmax);
    }
    v
}

fn table(c: f64, delta: f64, dmax: u64, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if dmax == 0 {
        return Err(Failure::Invalid("--dmax must be >= 1".into()));
    }
    let t = shallow_deep_table(c, delta, &table_grid(dmax))?;
    for w in &t.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let cross = t.crossover.map(|d| d.to_string()).unwrap_or_else(|| "none".into());
    match format {
        Format::Csv => {
            writeln!(out, "d,deep_budget_log,shallow_floor_log,shallow_exceeds")?;
            for r in &t.rows {
                writeln!(out, "{},{:e},{:e},{}", r.d, r.deep_budget_log, r.shallow_floor_log, r.shallow_exceeds)?;
            }
            writeln!(err, "crossover d* = {cross}")?;
        }
        Format::Text => {
            writeln!(out, "{:>20}  {:>16}  {:>18}  {:>15}", "d", "deep_budget_log", "shallow_floor_log", "shallow_exceeds")?;
            for r in &t.rows {
                writeln!(
                    out,
                    "{:>20}  {:>16.6e}  {:>18.6e}  {:>15}",
                    r.d, r.deep_budget_log, r.shallow_floor_log, r.shallow_exceeds
                )?;
            }
            writeln!(out, "crossover d* = {cross}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        assert_eq!(table_grid(3), vec![1, 2, 3]);
        let g = table_grid(1000);
        assert_eq!(&g[18..], &[19, 20, 50, 100, 200, 500, 1000]);
        let g = table_grid(u64::MAX);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*g.last().unwrap(), u64::MAX);
    }
}
