//! Command-line front end: identity verification, scenario solving and
//! Monte Carlo validation, writing CSV and JSON results.
//!
//! Exit codes: 0 when every check passes, 1 on a numerical failure or a
//! failed check, 2 on usage or configuration errors.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{cmd_identities, cmd_solve, cmd_validate_mc, IdentitiesReport, McReport, SolveReport};
pub use config::{load_config, ScenarioConfig, WfBlock};

/// Output directory used when neither `--out` nor `KIMURA_OUT_DIR` is set.
pub const DEFAULT_OUT_DIR: &str = "kimura-out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<kimura_core::Error> for CliError {
    fn from(e: kimura_core::Error) -> Self {
        use kimura_core::Error as E;
        match e {
            E::Domain(_) | E::InitialCondition(_) | E::WfConfig(_) => CliError::Config(e.to_string()),
            E::NoConvergence { .. } | E::DepthLimit { .. } | E::NonFinite { .. } => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kimura", version, about = "Exact solutions of the neutral Kimura equation")]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "KIMURA_OUT_DIR", default_value = DEFAULT_OUT_DIR)]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check closed-form Gegenbauer identities against adaptive quadrature.
    Identities {
        /// Comma-separated Gegenbauer orders, each > -1/2.
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            value_parser = parse_alpha,
            default_value = "0.6,0.9,0.999,1.0,1.001,1.5,2.0,3.25"
        )]
        alpha: Vec<f64>,
        /// Highest polynomial degree checked.
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        /// Pass threshold on |closed − quadrature| / max(1, |closed|).
        #[arg(long, default_value_t = 1e-10, value_parser = parse_tol)]
        tol: f64,
    },
    /// Solve a scenario and write summary, density and metadata files.
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare the fixation probability with Wright-Fisher Monte Carlo.
    ValidateMc {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config's `wf` block.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.trim().parse().map_err(|e| format!("{s:?} is not a number: {e}"))?;
    if a.is_finite() && a > -0.5 {
        Ok(a)
    } else {
        Err(format!("alpha must be a finite number greater than -1/2, got {s}"))
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.trim().parse().map_err(|e| format!("{s:?} is not a number: {e}"))?;
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(format!("tol must be positive, got {s}"))
    }
}

/// Runs one parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Identities { alpha, n_max, tol } => {
            let report = cmd_identities(alpha, *n_max, *tol, &cli.out)?;
            println!(
                "identities: {} checks, {} failed, max abs error {:.3e} -> {}",
                report.checks,
                report.failures.len(),
                report.max_abs_error,
                report.path.display()
            );
            for f in &report.failures {
                eprintln!("FAIL {f}");
            }
            Ok(if report.failures.is_empty() { 0 } else { 1 })
        }
        Command::Solve { config } => {
            let report = cmd_solve(config, &cli.out)?;
            println!(
                "solve: N = {}, {} times, max mass residual {:.3e}, max mean residual {:.3e} -> {}",
                report.truncation,
                report.times,
                report.max_mass_residual,
                report.max_mean_residual,
                cli.out.display()
            );
            Ok(0)
        }
        Command::ValidateMc { config, seed } => {
            let report = cmd_validate_mc(config, &cli.out, *seed)?;
            println!(
                "validate-mc: {} times, max |z| {:.3}, heterozygosity {} -> {}",
                report.rows,
                report.max_abs_z,
                if report.heterozygosity_ok { "ok" } else { "off" },
                report.path.display()
            );
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}
