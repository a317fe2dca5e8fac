//! Command-line front end. Inputs are JSON documents; outputs are JSON
//! reports, except for lambda curves which are written as CSV.

pub mod commands;
pub mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] magharden::Error),
    /// A verification ran but did not pass; the report is still written.
    #[error("verification failed")]
    CheckFailed,
}

impl CliError {
    /// 0 success, 1 input, 2 quasi-self-adjointness, 3 hypothesis gate or
    /// failed check, 4 numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 1,
            CliError::CheckFailed => 3,
            CliError::Core(e) => match e {
                magharden::Error::NotQuasiSelfAdjoint { .. } => 2,
                e if e.is_hypothesis_gate() => 3,
                e if e.is_numerical() => 4,
                _ => 1,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "magharden", version, about = "Spectra of magnetic momenta on the circle and Hardy constants of complex magnetic fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic and Galerkin spectra of a circle potential.
    Spectrum(Common),
    /// Metric operator and its residual for a quasi-self-adjoint potential.
    Metric(Common),
    /// lambda_a(r) over a range of radii, as CSV.
    LambdaCurve(Common),
    /// Certified lower bound for a Hardy constant.
    Hardy(Common),
    /// Brute-force verification report.
    Verify(Common),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Input JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Fourier truncation M.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Angular grid size N, or quadrature points per side for `verify`.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Log-spaced radii `lo:hi:n`.
    #[arg(long)]
    pub radii: Option<String>,
    /// Seed for generated test-function suites.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Log-spaced radii from `lo:hi:n`.
pub fn parse_radii(arg: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Input(format!("radii must be lo:hi:n with 0 < lo < hi and n >= 2, got {arg:?}"));
    let parts: Vec<&str> = arg.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || n < 2 {
        return Err(bad());
    }
    Ok(magharden::hardy::log_radii(lo, hi, n))
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, or to standard output.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(contents.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source });
    };
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Caps the global thread pool at `MAGHARDEN_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(value) = std::env::var("MAGHARDEN_THREADS") {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("MAGHARDEN_THREADS must be a positive integer, got {value:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(())
}

/// Runs a command and writes its output. A failed verification still
/// writes its report before returning [`CliError::CheckFailed`].
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (common, outcome) = match &cli.command {
        Command::Spectrum(c) => (c, commands::spectrum(c)),
        Command::Metric(c) => (c, commands::metric(c)),
        Command::LambdaCurve(c) => (c, commands::lambda_curve(c)),
        Command::Hardy(c) => (c, commands::hardy(c)),
        Command::Verify(c) => (c, commands::verify(c)),
    };
    let output = outcome?;
    write_output(common.output.as_deref(), &output.text)?;
    if output.passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed)
    }
}
