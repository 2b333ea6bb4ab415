//! Batch front end: constants tables, inequality checks, Rayleigh sweeps and
//! PDE residual sweeps, emitted as CSV or JSON.
//!
//! Exit codes: 0 success, 1 residual check failed or other numerical
//! failure, 2 invalid configuration, 3 degenerate cone, 4 negative slack,
//! 5 quadrature not converged, 6 Rayleigh sweep not monotone.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::constants::{ProblemParams, SharpConstantReport};
use crate::error::Error;
use crate::extremal::{ExtremalSolution, ResidualRow};
use crate::finsler::{FinslerNorm, ProductNorm};
use crate::verify::{
    check_inequality_with_constant, cone_constant, domain_integrals, Bump, CutoffExtremal, GaussianProduct,
    InequalityReport, QuadratureSpec, TestFunction,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE_CONE: i32 = 3;
pub const EXIT_NEGATIVE_SLACK: i32 = 4;
pub const EXIT_QUADRATURE: i32 = 5;
pub const EXIT_NOT_MONOTONE: i32 = 6;

#[derive(Parser, Debug)]
#[command(name = "fhk", version, about = "Sharp constants and checks for the Finsler trace-Hardy inequality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of K(N,α,β), A_{α,β} and the boundedness residual.
    Constants(Flags),
    /// Check the half-space inequality on a suite of test functions.
    VerifyHalfspace(Flags),
    /// Check the cone inequality on a suite of test functions.
    VerifyCone(Flags),
    /// Rayleigh quotients of cut-off extremals on r = 10^-j, R = 10^j.
    RayleighSweep(Flags),
    /// PDE residual of the extremal on a 10 x 10 (ρ, θ) grid.
    Residuals(Flags),
}

#[derive(Args, Debug, Default, Clone)]
struct Flags {
    /// Dimension(s) N, comma separated.
    #[arg(long = "N")]
    n: Option<String>,
    /// Weight exponent(s) β, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Cone half-angle(s) α in radians, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// euclidean | pnorm:<p> | quad:<row-major matrix entries>
    #[arg(long)]
    norm: Option<String>,
    /// Inner truncation radius in Φ⁰ (default 1e-3).
    #[arg(long = "r-in")]
    r_in: Option<String>,
    /// Outer truncation radius in Φ⁰ (default 1e3).
    #[arg(long = "r-out")]
    r_out: Option<String>,
    /// Resolutions n_radial,n_angular,n_sphere.
    #[arg(long)]
    res: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Replace the sharp constant in inequality checks (negative controls).
    #[arg(long = "k-override", allow_hyphen_values = true)]
    k_override: Option<String>,
    /// Seed of the randomized bump suite.
    #[arg(long)]
    seed: Option<String>,
    /// Last j of the Rayleigh sweep.
    #[arg(long = "j-max")]
    j_max: Option<String>,
    /// Number of bumps per parameter set.
    #[arg(long)]
    count: Option<String>,
    /// Test function family: bump | cutoff | gaussian
    #[arg(long)]
    family: Option<String>,
    /// File of key=value lines; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

const CONFIG_KEYS: [&str; 14] = [
    "N", "beta", "alpha", "norm", "r-in", "r-out", "res", "format", "out", "k-override", "seed", "j-max", "count",
    "family",
];

impl Flags {
    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        Some(match key {
            "N" => &mut self.n,
            "beta" => &mut self.beta,
            "alpha" => &mut self.alpha,
            "norm" => &mut self.norm,
            "r-in" => &mut self.r_in,
            "r-out" => &mut self.r_out,
            "res" => &mut self.res,
            "format" => &mut self.format,
            "out" => &mut self.out,
            "k-override" => &mut self.k_override,
            "seed" => &mut self.seed,
            "j-max" => &mut self.j_max,
            "count" => &mut self.count,
            "family" => &mut self.family,
            _ => return None,
        })
    }

    fn merge_config(&mut self) -> Result<(), String> {
        let Some(path) = self.config.clone() else {
            return Ok(());
        };
        let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
            let key = key.trim();
            let slot = self.slot(key).ok_or_else(|| {
                format!("config line {}: unknown key '{key}' (known: {})", lineno + 1, CONFIG_KEYS.join(", "))
            })?;
            if slot.is_none() {
                *slot = Some(value.trim().to_string());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteFamily {
    Bump,
    Cutoff,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    Euclidean,
    PNorm(f64),
    Quadratic(Vec<f64>),
}

impl NormSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "euclidean" {
            return Ok(Self::Euclidean);
        }
        if let Some(p) = s.strip_prefix("pnorm:") {
            return p.trim().parse().map(Self::PNorm).map_err(|_| format!("invalid p in '{s}'"));
        }
        if let Some(m) = s.strip_prefix("quad:") {
            return parse_list::<f64>(m, "quad").map(Self::Quadratic);
        }
        Err(format!("unknown norm '{s}' (expected euclidean | pnorm:<p> | quad:<entries>)"))
    }

    /// The norm on ℝᵈ.
    pub fn build(&self, dim: usize) -> crate::Result<FinslerNorm> {
        match self {
            Self::Euclidean => FinslerNorm::euclidean(dim),
            Self::PNorm(p) => FinslerNorm::p_norm(dim, *p),
            Self::Quadratic(entries) => {
                if entries.len() != dim * dim {
                    return Err(Error::InvalidNorm(format!(
                        "quad needs {} entries for boundary dimension {dim}, got {}",
                        dim * dim,
                        entries.len()
                    )));
                }
                FinslerNorm::weighted_quadratic(DMatrix::from_row_slice(dim, dim, entries))
            }
        }
    }
}

/// A fully validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: Vec<ProblemParams>,
    pub norm: NormSpec,
    pub quadrature: QuadratureSpec,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub k_override: Option<f64>,
    pub seed: u64,
    pub j_max: usize,
    pub count: usize,
    pub family: SuiteFamily,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    let items: Result<Vec<T>, _> = s.split(',').map(|v| v.trim().parse::<T>()).collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(format!("invalid value for {what}: '{s}'")),
    }
}

fn parse_one<T: std::str::FromStr>(s: &Option<String>, what: &str, default: T) -> Result<T, String> {
    match s {
        None => Ok(default),
        Some(v) => v.trim().parse().map_err(|_| format!("invalid value for {what}: '{v}'")),
    }
}

fn resolve(flags: &Flags, alpha_allowed: bool) -> Result<RunConfig, String> {
    let ns: Vec<usize> = flags.n.as_deref().map_or(Ok(vec![4]), |s| parse_list(s, "N"))?;
    let betas: Vec<f64> = flags.beta.as_deref().map_or(Ok(vec![2.0]), |s| parse_list(s, "beta"))?;
    let alphas: Vec<f64> = flags.alpha.as_deref().map_or(Ok(vec![0.0]), |s| parse_list(s, "alpha"))?;
    if !alpha_allowed && alphas.iter().any(|&a| a != 0.0) {
        return Err("this command works on the half-space; use verify-cone for alpha != 0".into());
    }
    let norm = NormSpec::parse(flags.norm.as_deref().unwrap_or("euclidean"))?;
    let mut grid = Vec::new();
    for &n in &ns {
        for &beta in &betas {
            for &alpha in &alphas {
                grid.push(ProblemParams::new(n, beta, alpha).map_err(|e| e.to_string())?);
            }
        }
        if n >= 3 {
            norm.build(n - 1).map_err(|e| e.to_string())?;
        }
    }
    let defaults = QuadratureSpec::default();
    let res: Vec<usize> = match &flags.res {
        None => vec![defaults.n_radial, defaults.n_angular, defaults.n_sphere],
        Some(s) => parse_list(s, "res")?,
    };
    if res.len() != 3 {
        return Err(format!("res needs three values nr,na,ns, got {}", res.len()));
    }
    let quadrature = QuadratureSpec::new(
        parse_one(&flags.r_in, "r-in", defaults.r_in)?,
        parse_one(&flags.r_out, "r-out", defaults.r_out)?,
        (res[0], res[1], res[2]),
    )
    .map_err(|e| e.to_string())?;
    let format = match flags.format.as_deref().unwrap_or("csv") {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return Err(format!("unknown format '{other}' (expected csv | json)")),
    };
    let family = match flags.family.as_deref().unwrap_or("bump") {
        "bump" => SuiteFamily::Bump,
        "cutoff" => SuiteFamily::Cutoff,
        "gaussian" => SuiteFamily::Gaussian,
        other => return Err(format!("unknown family '{other}' (expected bump | cutoff | gaussian)")),
    };
    let k_override = match &flags.k_override {
        None => None,
        Some(v) => Some(v.trim().parse::<f64>().map_err(|_| format!("invalid value for k-override: '{v}'"))?),
    };
    let j_max = parse_one(&flags.j_max, "j-max", 4usize)?;
    let count = parse_one(&flags.count, "count", 4usize)?;
    if count == 0 {
        return Err("count must be positive".into());
    }
    Ok(RunConfig {
        grid,
        norm,
        quadrature,
        format,
        out: flags.out.as_ref().map(PathBuf::from),
        k_override,
        seed: parse_one(&flags.seed, "seed", 0u64)?,
        j_max,
        count,
        family,
    })
}

/// Result of one invocation: exit code and the text for stdout/stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ParamOutOfRange(_)
        | Error::InvalidNorm(_)
        | Error::Config(_)
        | Error::DimensionMismatch { .. } => EXIT_INVALID,
        Error::DegenerateCone(_) => EXIT_DEGENERATE_CONE,
        Error::QuadratureNotConverged { .. } => EXIT_QUADRATURE,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => {
                    let text = e.to_string();
                    let first = text.lines().next().unwrap_or("invalid arguments");
                    Outcome::fail(EXIT_INVALID, first.trim_start_matches("error: "))
                }
            };
        }
    };
    let (mut flags, kind) = match cli.command {
        Command::Constants(f) => (f, Kind::Constants),
        Command::VerifyHalfspace(f) => (f, Kind::VerifyHalfspace),
        Command::VerifyCone(f) => (f, Kind::VerifyCone),
        Command::RayleighSweep(f) => (f, Kind::RayleighSweep),
        Command::Residuals(f) => (f, Kind::Residuals),
    };
    if let Err(msg) = flags.merge_config() {
        return Outcome::fail(EXIT_INVALID, msg);
    }
    let alpha_allowed = !matches!(kind, Kind::VerifyHalfspace);
    let config = match resolve(&flags, alpha_allowed) {
        Ok(c) => c,
        Err(msg) => return Outcome::fail(EXIT_INVALID, msg),
    };
    let result = match kind {
        Kind::Constants => cmd_constants(&config),
        Kind::VerifyHalfspace | Kind::VerifyCone => cmd_verify(&config),
        Kind::RayleighSweep => cmd_rayleigh_sweep(&config),
        Kind::Residuals => cmd_residuals(&config),
    };
    match result {
        Ok((code, table)) => deliver(&config, code, table),
        Err(e) => Outcome::fail(exit_code(&e), e),
    }
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Constants,
    VerifyHalfspace,
    VerifyCone,
    RayleighSweep,
    Residuals,
}

fn deliver(config: &RunConfig, code: i32, table: String) -> Outcome {
    match &config.out {
        None => Outcome {
            code,
            stdout: table,
            stderr: String::new(),
        },
        Some(path) => match std::fs::write(path, table) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::fail(EXIT_INVALID, format!("cannot write {}: {e}", path.display())),
        },
    }
}

/// 12 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.11e}")
}

fn round12(v: f64) -> f64 {
    if v.is_finite() {
        format_number(v).parse().unwrap_or(v)
    } else {
        v
    }
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round12(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serializes rows as a JSON array with numbers rounded to 12 digits.
fn json_table<T: Serialize>(rows: &[T]) -> crate::Result<String> {
    let mut v = serde_json::to_value(rows).map_err(|e| Error::Config(e.to_string()))?;
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> crate::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_constants(config: &RunConfig) -> crate::Result<(i32, String)> {
    let reports = config
        .grid
        .iter()
        .map(|&p| SharpConstantReport::compute(p))
        .collect::<crate::Result<Vec<_>>>()?;
    let table = match config.format {
        Format::Json => json_table(&reports)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.params.n.to_string(),
                        format_number(r.params.beta),
                        format_number(r.params.alpha),
                        format_number(r.k),
                        format_number(r.a),
                        format_number(r.boundedness_residual),
                    ]
                })
                .collect();
            csv_table(&["N", "beta", "alpha", "K", "A", "boundedness_residual"], &rows)?
        }
    };
    Ok((EXIT_OK, table))
}

/// The randomized bumps of the verification suite for boundary dimension d.
pub fn bump_suite(seed: u64, count: usize, d: usize) -> Vec<Bump> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r1 = rng.gen_range(0.5..1.5);
            let r2 = r1 * rng.gen_range(1.5..3.0);
            let amplitude = rng.gen_range(0.5..2.0);
            let tilt_x = (0..d).map(|_| rng.gen_range(-0.3..0.3)).collect();
            let tilt_t = rng.gen_range(-0.3..0.3);
            Bump::new(r1, r2)
                .expect("r1 < r2 by construction")
                .with_amplitude(amplitude)
                .with_tilt(tilt_x, tilt_t)
        })
        .collect()
}

fn suite(config: &RunConfig, params: &ProblemParams, base: &FinslerNorm) -> crate::Result<Vec<Box<dyn TestFunction>>> {
    Ok(match config.family {
        SuiteFamily::Bump => bump_suite(config.seed, config.count, base.dim())
            .into_iter()
            .map(|b| Box::new(b) as Box<dyn TestFunction>)
            .collect(),
        SuiteFamily::Gaussian => vec![Box::new(GaussianProduct)],
        SuiteFamily::Cutoff => {
            let sol = ExtremalSolution::cone(base.clone(), params.beta, params.alpha)?;
            let q = &config.quadrature;
            vec![Box::new(CutoffExtremal::new(sol, q.r_in, q.r_out)?)]
        }
    })
}

fn cmd_verify(config: &RunConfig) -> crate::Result<(i32, String)> {
    let mut reports: Vec<InequalityReport> = Vec::new();
    for params in &config.grid {
        let base = config.norm.build(params.n - 1)?;
        let product = ProductNorm::new(base.clone());
        let constant = match config.k_override {
            Some(k) => k,
            None => cone_constant(params)?,
        };
        for u in suite(config, params, &base)? {
            reports.push(check_inequality_with_constant(u.as_ref(), &product, *params, constant, &config.quadrature)?);
        }
    }
    let code = if reports.iter().all(InequalityReport::holds) {
        EXIT_OK
    } else {
        EXIT_NEGATIVE_SLACK
    };
    let table = match config.format {
        Format::Json => json_table(&reports)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.params.n.to_string(),
                        format_number(r.params.beta),
                        format_number(r.params.alpha),
                        r.family.clone(),
                        format_number(r.r_in),
                        format_number(r.r_out),
                        format_number(r.lhs_boundary),
                        format_number(r.rhs_energy),
                        format_number(r.hardy_term),
                        format_number(r.slack),
                        format_number(r.error_estimate),
                    ]
                })
                .collect();
            csv_table(
                &["N", "beta", "alpha", "family", "r_in", "r_out", "lhs", "energy", "hardy", "slack", "err"],
                &rows,
            )?
        }
    };
    Ok((code, table))
}

fn single(config: &RunConfig, what: &str) -> crate::Result<ProblemParams> {
    match config.grid.as_slice() {
        [p] => Ok(*p),
        _ => Err(Error::Config(format!("{what} takes a single N, beta and alpha"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub j: usize,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub quotient: f64,
    pub ratio: f64,
    /// error estimate of the quotient
    pub err: f64,
}

/// Rayleigh quotients of the log-sine cut-off extremal on
/// (10^{−j}, 10^{j}), j = 1..j_max, with error estimates.
pub fn rayleigh_sweep(
    base: &FinslerNorm,
    params: ProblemParams,
    j_max: usize,
    resolution: (usize, usize, usize),
) -> crate::Result<Vec<SweepRow>> {
    let product = ProductNorm::new(base.clone());
    let solution = ExtremalSolution::cone(base.clone(), params.beta, params.alpha)?;
    let constant = cone_constant(&params)?;
    let c = params.hardy_coefficient();
    (1..=j_max)
        .map(|j| {
            let r = 10f64.powi(-(j as i32));
            let big_r = 1.0 / r;
            let u = CutoffExtremal::new(solution.clone(), r, big_r)?;
            let q = QuadratureSpec::new(r, big_r, resolution)?;
            let i = domain_integrals(&u, &product, params.alpha, &q)?;
            let b = i.boundary.value;
            if b < crate::verify::MIN_BOUNDARY_INTEGRAL {
                return Err(Error::ZeroBoundaryTrace(b));
            }
            let quotient = (i.energy.value - c * i.inverse_square.value) / b;
            let err = (i.energy.error_estimate + c * i.inverse_square.error_estimate
                + quotient.abs() * i.boundary.error_estimate)
                / b;
            Ok(SweepRow {
                j,
                r,
                big_r,
                quotient,
                ratio: quotient / constant,
                err,
            })
        })
        .collect()
}

/// True when each quotient is at most the previous one plus both error
/// estimates.
pub fn is_monotone(rows: &[SweepRow]) -> bool {
    rows.windows(2)
        .all(|w| w[1].quotient <= w[0].quotient + w[0].err + w[1].err)
}

fn cmd_rayleigh_sweep(config: &RunConfig) -> crate::Result<(i32, String)> {
    if config.j_max == 0 {
        return Err(Error::Config("j-max must be at least 1 (empty sweep)".into()));
    }
    let params = single(config, "rayleigh-sweep")?;
    let base = config.norm.build(params.n - 1)?;
    let q = &config.quadrature;
    let rows = rayleigh_sweep(&base, params, config.j_max, (q.n_radial, q.n_angular, q.n_sphere))?;
    let code = if is_monotone(&rows) { EXIT_OK } else { EXIT_NOT_MONOTONE };
    let table = match config.format {
        Format::Json => json_table(&rows)?,
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.j.to_string(),
                        format_number(r.r),
                        format_number(r.big_r),
                        format_number(r.quotient),
                        format_number(r.ratio),
                    ]
                })
                .collect();
            csv_table(&["j", "r", "R", "quotient", "ratio"], &body)?
        }
    };
    Ok((code, table))
}

/// ρ ∈ [0.5, 2] and θ ∈ [0.1, 1.4] (shifted to start above α for cones),
/// ten values each, along the diagonal direction of the boundary.
pub fn residual_grid(base: &FinslerNorm, params: ProblemParams) -> crate::Result<Vec<ResidualRow>> {
    let sol = ExtremalSolution::cone(base.clone(), params.beta, params.alpha)?;
    let rhos: Vec<f64> = (0..10).map(|i| 0.5 + 1.5 * i as f64 / 9.0).collect();
    let lo = 0.1_f64.max(params.alpha + 0.1);
    let hi = 1.4_f64.min(FRAC_PI_2 - 0.1);
    let thetas: Vec<f64> = (0..10).map(|i| lo + (hi - lo) * i as f64 / 9.0).collect();
    let d = base.dim();
    let direction = vec![1.0 / (d as f64).sqrt(); d];
    sol.residual_sweep(&direction, &rhos, &thetas)
}

fn cmd_residuals(config: &RunConfig) -> crate::Result<(i32, String)> {
    let params = single(config, "residuals")?;
    let base = config.norm.build(params.n - 1)?;
    let rows = residual_grid(&base, params)?;
    let code = if rows.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_CHECK_FAILED };
    let table = match config.format {
        Format::Json => json_table(&rows)?,
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format_number(r.rho),
                        format_number(r.theta),
                        format_number(r.residual),
                        format_number(r.tolerance),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            csv_table(&["rho", "theta", "residual", "tolerance", "pass"], &body)?
        }
    };
    Ok((code, table))
}
