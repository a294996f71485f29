use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use polarsphere::experiments::ExperimentReport;

mod commands;
mod config;

use config::{resolve, resolve_seed, ConfigFile, UsageError, SEED_ENV};

#[derive(Parser, Debug)]
#[command(
    name = "polarsphere",
    version,
    about = "Random polarization experiments on the d-sphere"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (falls back to POLARSPHERE_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report format: csv or json
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for trial-parallel experiments
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Require an explicit seed and omit wall time so output bytes are reproducible
    #[arg(long, global = true)]
    ci: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convergence table of E[m(S_n A △ A*)] with bound check and power-law fit
    Converge(commands::ConvergeArgs),
    /// Tail of the polar distance after one compression, on a grid
    Law(commands::LawArgs),
    /// KS distance of n·δ_n from π·Γ(d)
    Gamma(commands::GammaArgs),
    /// n·E[m(S_n A △ A*)] for a hemisphere against its limit d
    Limit(commands::LimitArgs),
    /// Compression chain tail against the order-statistic chain tail
    Dominate(commands::DominateArgs),
    /// Both sides of the polarization intersection identity
    Identity(commands::IdentityArgs),
}

const KNOWN_KEYS: &[&str] = &[
    "a",
    "alpha",
    "axes",
    "b",
    "burn_in",
    "ci",
    "d",
    "ell",
    "format",
    "mc",
    "n",
    "output",
    "points",
    "polar_cap_samples",
    "samples",
    "seed",
    "set",
    "threads",
    "threshold",
    "tolerance",
    "trials",
    "xi",
];

pub struct Settings {
    pub seed: u64,
    pub config: ConfigFile,
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let config = match &cli.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    if let Some(key) = config.keys().find(|k| !KNOWN_KEYS.contains(k)) {
        return Err(UsageError(format!("unknown config key `{key}`")).into());
    }
    let ci = cli.common.ci || config.get::<bool>("ci")?.unwrap_or(false);
    let env_seed = std::env::var(SEED_ENV).ok();
    let seed = resolve_seed(cli.common.seed, &config, env_seed.as_deref(), ci)?;
    let format = match cli.common.format {
        Some(f) => f,
        None => match config.get_str("format") {
            Some(raw) => raw.parse().map_err(UsageError)?,
            None => Format::Csv,
        },
    };
    let output = cli
        .common
        .output
        .clone()
        .or_else(|| config.get_str("output").map(PathBuf::from));
    let threads: Option<usize> = match cli.common.threads {
        Some(t) => Some(t),
        None => config.get("threads")?,
    };
    let settings = Settings { seed, config };

    let start = Instant::now();
    let report = match threads {
        Some(0) => return Err(UsageError("--threads must be at least 1".into()).into()),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .context("building the worker pool")?
            .install(|| commands::dispatch(&cli.command, &settings))?,
        None => commands::dispatch(&cli.command, &settings)?,
    };
    let mut report = report;
    report.runtime_s = if ci {
        None
    } else {
        Some(start.elapsed().as_secs_f64())
    };

    match output {
        Some(path) => {
            let file = File::create(&path)
                .map_err(|e| polarsphere::Error::Output(format!("{}: {e}", path.display())))?;
            write_report(&report, format, BufWriter::new(file))?;
        }
        None => write_report(&report, format, io::stdout().lock())?,
    }
    for v in report.verdicts.iter().filter(|v| !v.passed) {
        eprintln!("verdict failed: {} ({})", v.name, v.detail);
    }
    Ok(report.passed())
}

fn write_report<W: Write>(
    report: &ExperimentReport,
    format: Format,
    mut w: W,
) -> anyhow::Result<()> {
    match format {
        Format::Csv => report.write_csv(&mut w)?,
        Format::Json => report.write_json(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    if let Some(e) = err.downcast_ref::<polarsphere::Error>() {
        return match e {
            polarsphere::Error::DepthLimit { .. } | polarsphere::Error::Output(_) => 3,
            _ => 2,
        };
    }
    3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Resolves a per-command parameter against the config file.
pub fn param<T: FromStr>(
    flag: Option<T>,
    settings: &Settings,
    key: &str,
    default: T,
) -> Result<T, UsageError> {
    resolve(flag, &settings.config, key, default)
}
