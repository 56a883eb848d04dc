//! Command-line front end of the `nkk` binary.
//!
//! Every subcommand writes its outputs plus a [`RunManifest`] and is
//! deterministic given its flags and seed. `NKK_SEED` supplies the default
//! seed.

pub mod io;
pub mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arfima::{self, ArfimaSpec};
use crate::asymptotics::estimate_limit_law;
use crate::lad::{harmonic_design, is_admissible, max_frequency_index, DEFAULT_TOL};
use crate::montecarlo::{run_study, Statistic, StudyConfig};
use crate::spectral::{classical_periodogram, nkk_periodogram};
use crate::stats::linspace;
use crate::wavelet::{dwt, filter_bank, modwt, FilterName};

use io::{read_series, sidecar, write_columns, write_json};
pub use manifest::{config_digest, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "nkk",
    version,
    about = "Wavelet LAD periodograms and their limit law"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate an ARFIMA path with Student-t innovations.
    Simulate(SimulateArgs),
    /// DWT or MODWT coefficients of a series.
    Transform(TransformArgs),
    /// Classical or NKK periodogram of wavelet coefficients.
    Periodogram(PeriodogramArgs),
    /// Estimated limit law of the NKK ordinate from regression residuals.
    Limit(LimitArgs),
    /// Monte Carlo study of the NKK ordinate.
    Mc(McArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Fractional noise ARFIMA(0,d,0).
    Fd,
    /// ARFIMA(1,d,1).
    Arfima11,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "fd")]
    pub model: ModelKind,
    #[arg(long, default_value_t = 0.0)]
    pub d: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 5.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Discarded prefix; defaults to max(1000, n).
    #[arg(long)]
    pub burn_in: Option<usize>,
}

impl ModelArgs {
    fn spec(&self, seed: u64) -> Result<ArfimaSpec> {
        let (phi, theta) = match self.model {
            ModelKind::Fd => {
                if self.phi != 0.0 || self.theta != 0.0 {
                    bail!("--phi/--theta require --model arfima11");
                }
                (0.0, 0.0)
            }
            ModelKind::Arfima11 => (self.phi, self.theta),
        };
        let spec = ArfimaSpec {
            burn_in: self.burn_in,
            seed,
            ..ArfimaSpec::arfima11(phi, theta, self.d, self.nu, self.n)
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, env = "NKK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformMode {
    Dwt,
    Modwt,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TransformArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "la8")]
    pub filter: FilterName,
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    #[arg(long, value_enum, default_value = "modwt")]
    pub mode: TransformMode,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrdinateKind {
    Classical,
    Nkk,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct PeriodogramArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "nkk")]
    pub kind: OrdinateKind,
    #[arg(long, default_value = "la8")]
    pub filter: FilterName,
    /// MODWT depth J0.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// Level to use without --average (0 = untransformed series); defaults to J0.
    #[arg(long, conflicts_with = "average")]
    pub level: Option<usize>,
    /// Average the ordinates over levels 1..=J0.
    #[arg(long)]
    pub average: bool,
    /// Inclusive frequency-index range `a:b`; defaults to every admissible index.
    #[arg(long, value_parser = parse_range)]
    pub k_range: Option<(usize, usize)>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct LimitArgs {
    /// Residual series.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Sign-autocovariance truncation lag; defaults to the cube root of n.
    #[arg(long = "H")]
    pub max_lag: Option<usize>,
    /// Evaluation grid `lo:hi:count`; defaults to 0 up to the 0.999 quantile.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(f64, f64, usize)>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct McArgs {
    /// JSON study configuration; inline flags are ignored when given.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "la8")]
    pub filter: FilterName,
    /// MODWT depth; defaults to floor(log2 n) - 3.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Single level instead of the scale average (0 = untransformed series).
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long = "H")]
    pub max_lag: Option<usize>,
    #[arg(long, env = "NKK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

fn parse_grid(s: &str) -> std::result::Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:count, got {s:?}"));
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("{e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("{e}"))?;
    if !(lo >= 0.0 && hi > lo && count >= 2) {
        return Err(format!("grid needs 0 <= lo < hi and count >= 2, got {s:?}"));
    }
    Ok((lo, hi, count))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn simulate(args: &SimulateArgs, argv: &[String]) -> Result<()> {
    let started = manifest::now();
    let spec = args.model.spec(args.seed)?;
    let series = arfima::simulate(&spec)?;
    write_columns(&args.out, &["value"], &[&series])?;
    write_json(
        &sidecar(&args.out),
        &RunManifest::new(argv, &spec, Some(args.seed), started),
    )
}

fn transform(args: &TransformArgs, argv: &[String]) -> Result<()> {
    let started = manifest::now();
    let x = read_series(&args.input)?;
    let filter = filter_bank(args.filter)?;
    let (wavelet, scaling) = match args.mode {
        TransformMode::Dwt => {
            let r = dwt(&x, &filter, args.levels)?;
            (r.wavelet, r.scaling)
        }
        TransformMode::Modwt => {
            let r = modwt(&x, &filter, args.levels)?;
            (r.wavelet, r.scaling)
        }
    };
    let mut headers: Vec<String> = (1..=wavelet.len()).map(|j| format!("w{j}")).collect();
    headers.push("v".into());
    let mut columns: Vec<&[f64]> = wavelet.iter().map(|w| w.as_slice()).collect();
    columns.push(&scaling);
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    write_columns(&args.out, &header_refs, &columns)?;
    write_json(
        &sidecar(&args.out),
        &RunManifest::new(argv, args, None, started),
    )
}

fn periodogram(args: &PeriodogramArgs, argv: &[String]) -> Result<()> {
    let started = manifest::now();
    let x = read_series(&args.input)?;
    let n = x.len();
    let levels: Vec<usize> = if args.average {
        (1..=args.levels).collect()
    } else {
        vec![args.level.unwrap_or(args.levels)]
    };
    let series_at: Vec<Vec<f64>> = if levels == [0] {
        vec![x]
    } else {
        let t = modwt(&x, &filter_bank(args.filter)?, args.levels)?;
        levels
            .iter()
            .map(|&j| {
                t.level(j)
                    .map(<[f64]>::to_vec)
                    .with_context(|| format!("level {j} outside 0..={}", args.levels))
            })
            .collect::<Result<_>>()?
    };
    let (lo, hi) = args.k_range.unwrap_or((1, max_frequency_index(n)));
    let mut ks = Vec::new();
    for k in lo..=hi {
        if is_admissible(n, k) {
            ks.push(k);
        } else {
            log::warn!("skipping degenerate frequency index k = {k} for n = {n}");
        }
    }
    let mut values = vec![0.0; ks.len()];
    for coeffs in &series_at {
        let p = match args.kind {
            OrdinateKind::Classical => classical_periodogram(coeffs, &ks)?,
            OrdinateKind::Nkk => nkk_periodogram(coeffs, &ks, args.tol)?,
        };
        values.iter_mut().zip(&p.values).for_each(|(a, b)| *a += b);
    }
    let m = series_at.len() as f64;
    values.iter_mut().for_each(|v| *v /= m);
    let kf: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let freqs: Vec<f64> = ks
        .iter()
        .map(|&k| harmonic_design(n, k).map(|d| d.lambda_k))
        .collect::<crate::Result<_>>()?;
    write_columns(
        &args.out,
        &["k", "lambda_k", "value"],
        &[&kf, &freqs, &values],
    )?;
    write_json(
        &sidecar(&args.out),
        &RunManifest::new(argv, args, None, started),
    )
}

#[derive(Serialize)]
struct LawReport<'a> {
    f0: Option<f64>,
    gamma: &'a [f64],
    sigma: [[f64; 2]; 2],
    eigenvalues: [f64; 2],
    clamped: bool,
    lambda_k: f64,
    k: usize,
    n: usize,
    max_lag: usize,
    manifest: RunManifest,
}

fn limit(args: &LimitArgs, argv: &[String]) -> Result<()> {
    let started = manifest::now();
    let residuals = read_series(&args.input)?;
    let n = residuals.len();
    let design = harmonic_design(n, args.k)?;
    let law = estimate_limit_law(&residuals, design.lambda_k, args.max_lag)?;
    let mixture = law.mixture()?;
    let grid = match args.grid {
        Some((lo, hi, count)) => linspace(lo, hi, count),
        None => linspace(0.0, mixture.quantile(0.999), 200),
    };
    let density: Vec<f64> = grid.iter().map(|&y| mixture.density(y)).collect();
    let cdf: Vec<f64> = grid.iter().map(|&y| mixture.cdf(y)).collect();
    ensure_dir(&args.out_dir)?;
    write_columns(
        &args.out_dir.join("grid.csv"),
        &["y", "density", "cdf"],
        &[&grid, &density, &cdf],
    )?;
    let report = LawReport {
        f0: law.f0,
        gamma: &law.gamma,
        sigma: law.sigma,
        eigenvalues: law.eig,
        clamped: law.clamped,
        lambda_k: law.lambda_k,
        k: args.k,
        n,
        max_lag: law.gamma.len().saturating_sub(1),
        manifest: RunManifest::new(argv, args, None, started),
    };
    write_json(&args.out_dir.join("law.json"), &report)
}

fn study_config(args: &McArgs) -> Result<StudyConfig> {
    if let Some(path) = &args.config {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config: StudyConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(config);
    }
    Ok(StudyConfig {
        filter: args.filter,
        levels: args.levels,
        statistic: args.level.map_or(Statistic::Averaged, Statistic::Level),
        k: args.k,
        reps: args.reps,
        seed: args.seed,
        max_lag: args.max_lag,
        ..StudyConfig::new(args.model.spec(args.seed)?)
    })
}

#[derive(Serialize)]
struct StudyReport<'a> {
    ks_paper: f64,
    ks_thm2: f64,
    law: &'a crate::asymptotics::LimitLaw,
    level_laws: &'a [crate::montecarlo::LevelLaw],
    bandwidth: f64,
    seeds: &'a crate::montecarlo::SeedRecord,
    config: &'a StudyConfig,
    manifest: RunManifest,
}

fn mc(args: &McArgs, argv: &[String]) -> Result<()> {
    let started = manifest::now();
    let config = study_config(args)?;
    let summary = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()?
            .install(|| run_study(&config))?,
        None => run_study(&config)?,
    };
    ensure_dir(&args.out_dir)?;
    let index: Vec<f64> = (0..summary.samples.len()).map(|i| i as f64).collect();
    write_columns(
        &args.out_dir.join("samples.csv"),
        &["replication", "value"],
        &[&index, &summary.samples],
    )?;
    write_columns(
        &args.out_dir.join("density.csv"),
        &["y", "kde", "theory_paper", "theory_thm2"],
        &[
            &summary.grid,
            &summary.kde,
            &summary.theory_paper,
            &summary.theory_thm2,
        ],
    )?;
    let report = StudyReport {
        ks_paper: summary.ks_paper,
        ks_thm2: summary.ks_thm2,
        law: &summary.law,
        level_laws: &summary.level_laws,
        bandwidth: summary.bandwidth,
        seeds: &summary.seeds,
        config: &config,
        manifest: RunManifest::new(argv, &config, Some(config.seed), started),
    };
    log::info!(
        "ks_paper = {:.4}, ks_thm2 = {:.4}",
        summary.ks_paper,
        summary.ks_thm2
    );
    write_json(&args.out_dir.join("summary.json"), &report)
}

/// Parses `argv` (program name first) and runs the selected command.
pub fn run<I, T>(argv: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    execute(&cli, &argv)
}

pub fn execute(cli: &Cli, argv: &[String]) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => simulate(a, argv),
        Command::Transform(a) => transform(a, argv),
        Command::Periodogram(a) => periodogram(a, argv),
        Command::Limit(a) => limit(a, argv),
        Command::Mc(a) => mc(a, argv),
    }
}

/// Entry point of the binary: usage errors exit with 2, failures with 1.
pub fn main_entry() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
