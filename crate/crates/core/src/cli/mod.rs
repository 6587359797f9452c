//! Command-line front end.
//!
//! Every flag can also be set through an environment variable with the
//! `SPIN_FC_` prefix, e.g. `SPIN_FC_N_SPINS=100`. Flags win over the
//! environment, which wins over the config file, which wins over the preset.
//!
//! Exit codes:
//! - 0: success
//! - 2: unreadable, malformed or unknown configuration, or an I/O failure
//! - 3: domain error, i.e. well-formed values the model rejects (negative
//!   coupling, spin count above the supported range, zero temperature)
//! - 4: a `validate` check failed

pub mod config;
pub mod output;
pub mod scenarios;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub use config::{resolve, Overrides, Resolved, Scenario, ScenarioConfig};
pub use scenarios::Report;

pub const ENV_PREFIX: &str = "SPIN_FC_";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error(transparent)]
    Domain(#[from] crate::Error),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Validation(_) => 4,
        }
    }
}

/// Franck-Condon blockade of a central spin coupled to a nuclear-spin bath.
#[derive(Debug, Parser)]
#[command(name = "spin-fc", version)]
pub struct Cli {
    /// Scenario to run (positional form of `--scenario`).
    #[arg(value_enum)]
    pub scenario_pos: Option<Scenario>,
    /// Scenario to run.
    #[arg(
        long,
        value_enum,
        env = "SPIN_FC_SCENARIO",
        conflicts_with = "scenario_pos"
    )]
    pub scenario: Option<Scenario>,
    /// TOML scenario file.
    #[arg(long, env = "SPIN_FC_CONFIG")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "SPIN_FC_OUT")]
    pub out: Option<PathBuf>,
    /// Parameter preset.
    #[arg(long, env = "SPIN_FC_PRESET")]
    pub preset: Option<String>,
    /// Number of bath spins.
    #[arg(long, env = "SPIN_FC_N_SPINS")]
    pub n_spins: Option<usize>,
    /// Hyperfine coupling in units of the nuclear Larmor frequency.
    #[arg(long, env = "SPIN_FC_HYPERFINE", allow_negative_numbers = true)]
    pub hyperfine: Option<f64>,
    /// Observation window in units of 1/omega_nu.
    #[arg(long, env = "SPIN_FC_WINDOW_TIME", allow_negative_numbers = true)]
    pub window_time: Option<f64>,
    /// Bath temperature in kelvin.
    #[arg(long, env = "SPIN_FC_TEMPERATURE_K", allow_negative_numbers = true)]
    pub temperature_k: Option<f64>,
}

impl Cli {
    pub fn resolve(self) -> Result<Resolved, CliError> {
        let config = match &self.config {
            Some(path) => ScenarioConfig::load(path)?,
            None => ScenarioConfig::default(),
        };
        resolve(
            config,
            Overrides {
                scenario: self.scenario_pos.or(self.scenario),
                preset: self.preset,
                output: self.out,
                n_spins: self.n_spins,
                hyperfine: self.hyperfine,
                window_time: self.window_time,
                temperature_k: self.temperature_k,
            },
        )
    }
}

/// Run a resolved scenario. A failed invariant check maps to
/// [`CliError::Validation`] after the report is complete.
pub fn run(resolved: &Resolved) -> Result<Report, CliError> {
    log::info!(
        "scenario {} with N = {}, A = {}",
        resolved.scenario.name(),
        resolved.params.n_spins,
        resolved.params.hyperfine
    );
    scenarios::run(resolved)
}

/// Parse, run and report. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = cli.resolve().and_then(|r| run(&r));
    match outcome {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            if report.validation_failed {
                let e = CliError::Validation("one or more checks failed".into());
                eprintln!("error: {e}");
                e.exit_code()
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
