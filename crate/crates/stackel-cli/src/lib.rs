//! Command-line front end: config ingestion, the pipeline verbs and
//! deterministic serialization of their reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

pub use commands::Outcome;
pub use config::{ManifoldConfig, SCHEMA_VERSION};
pub use error::CliError;
pub use output::{to_json, RunManifest};

use crate::config::parse_overrides;
use crate::output::{OutDir, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "stackel", version, about = "Spectra, scattering data and uniqueness checks for separable manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Verb,
    /// Manifold config (JSON, schema 1)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Second manifold, for `verify`
    #[arg(long, global = true)]
    pub config_b: Option<PathBuf>,
    /// Spectral cutoff: modes with |(μ², ν²)| ≤ r-max
    #[arg(long, global = true, default_value_t = 10.0)]
    pub r_max: f64,
    /// Overrides the energy of the config(s)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Worker threads (0: one per core)
    #[arg(long, global = true, env = "STACKEL_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Tolerance overrides, `name=value[,name=value...]`
    #[arg(long, global = true)]
    pub tol_overrides: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Verb {
    /// Normalize the matrix and check the Robertson and end conditions
    Normalize,
    /// Joint angular spectrum with cone and counting diagnostics
    Spectrum,
    /// Per-mode scattering records and the asymptotic ladder
    Scatter,
    /// Compare two manifolds through their scattering data
    Verify,
    /// Asymptotic ladder only
    Asymptotics,
}

impl Verb {
    fn name(self) -> &'static str {
        match self {
            Verb::Normalize => "normalize",
            Verb::Spectrum => "spectrum",
            Verb::Scatter => "scatter",
            Verb::Verify => "verify",
            Verb::Asymptotics => "asymptotics",
        }
    }
}

/// 0 pass or equivalent, 1 distinct, 2 structural or usage error.
pub fn exit_code(result: &Result<Outcome, CliError>) -> u8 {
    match result {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Distinct(_)) => 1,
        Ok(Outcome::Structural(_)) | Err(_) => 2,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", cli.workers)))?;
    pool.install(|| run_verb(cli))
}

fn run_verb(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let path = cli.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let cfg = ManifoldConfig::load(path)?;
    let second = match (cli.command, &cli.config_b) {
        (Verb::Verify, Some(p)) => Some(ManifoldConfig::load(p)?),
        (Verb::Verify, None) => return Err(CliError::Usage("verify needs --config-b".into())),
        _ => None,
    };
    if !(cli.r_max > 0.0 && cli.r_max.is_finite()) {
        return Err(CliError::Usage(format!("--r-max must be positive, got {}", cli.r_max)));
    }
    let lambda = match (cli.lambda, &second) {
        (Some(l), _) if !(l != 0.0 && l.is_finite()) => {
            return Err(CliError::Usage(format!("--lambda must be finite and nonzero, got {l}")))
        }
        (Some(l), _) => l,
        (None, Some(b)) if b.lambda != cfg.lambda => {
            return Err(CliError::Usage("the two configs have different lambda; pass --lambda".into()))
        }
        (None, _) => cfg.lambda,
    };
    let extra = cli.tol_overrides.as_deref().map(parse_overrides).transpose()?.unwrap_or_default();
    let tol = cfg.tolerance_set(&extra)?;

    let mut hashes = vec![cfg.hash()];
    hashes.extend(second.iter().map(|b| b.hash()));
    let uses_cutoff = matches!(cli.command, Verb::Spectrum | Verb::Scatter | Verb::Verify);
    let manifest = RunManifest {
        command: cli.command.name().into(),
        config_hash: hashes,
        tool_version: TOOL_VERSION.into(),
        lambda,
        r_max: uses_cutoff.then_some(cli.r_max),
        tolerances: tol.clone(),
    };
    let out = OutDir::new(&cli.out_dir)?;
    let outcome = match cli.command {
        Verb::Normalize => commands::cmd_normalize(&cfg, &tol, &manifest, &out)?,
        Verb::Spectrum => commands::cmd_spectrum(&cfg, lambda, cli.r_max, &tol, &manifest, &out)?,
        Verb::Scatter => commands::cmd_scatter(&cfg, lambda, cli.r_max, &tol, &manifest, &out)?,
        Verb::Asymptotics => commands::cmd_asymptotics(&cfg, lambda, &tol, &manifest, &out)?,
        Verb::Verify => {
            let b = second.as_ref().expect("checked above");
            commands::cmd_verify(&cfg, b, lambda, cli.r_max, &tol, &manifest, &out)?.0
        }
    };
    out.write_timing(cli.command.name(), &manifest, start.elapsed().as_secs_f64())?;
    Ok(outcome)
}
