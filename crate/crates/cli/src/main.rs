//! `qudit`: spectra, dynamics, gate synthesis and continuum checks for
//! coupled-well qudits.

mod artifact;
mod commands;
mod config;
mod error;
mod system;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::artifact::{render, write_atomic, Outcome};
use crate::commands::{evolve, oracle, pulse, revival, spectrum, synth, validate};
use crate::config::{resolve, CommonArgs, Format};
use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "qudit", version, about = "Coupled-well qudit toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues and degeneracies of a well Hamiltonian
    Spectrum(spectrum::SpectrumArgs),
    /// Time trace of a state under a well Hamiltonian
    Evolve(evolve::EvolveArgs),
    /// Smallest time after which every state returns up to phase
    Revival(revival::RevivalArgs),
    /// Decompose a target gate into native operations
    Synth(synth::SynthArgs),
    /// SFQ pulse timing for a Z drive or an axis tilt
    PulsePlan(pulse::PulseArgs),
    /// Check the few-level reduction against a 1D grid solution
    Oracle(oracle::OracleArgs),
    /// Seeded property checks of the whole toolkit
    Validate(validate::ValidateArgs),
}

/// Config types expose the output format they resolved to.
trait Formatted {
    fn format(&self) -> Format;
}

macro_rules! formatted {
    ($($t:ty),*) => {
        $(impl Formatted for $t {
            fn format(&self) -> Format {
                self.format
            }
        })*
    };
}

formatted!(
    spectrum::SpectrumConfig,
    evolve::EvolveConfig,
    revival::RevivalConfig,
    synth::SynthConfig,
    pulse::PulseConfig,
    oracle::OracleConfig,
    validate::ValidateConfig
);

fn execute<A, C>(name: &str, args: &A, common: &CommonArgs, run: fn(&C) -> CliResult<Outcome>) -> CliResult<()>
where
    A: Serialize,
    C: Serialize + DeserializeOwned + Formatted,
{
    let cfg: C = resolve(name, args, common.config.as_deref())?;
    log::debug!("resolved {name} configuration");
    let outcome = run(&cfg)?;
    let text = render(name, &serde_json::to_value(&cfg)?, &outcome, cfg.format())?;
    match &common.output {
        Some(path) => write_atomic(path, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(outcome.failures.join("; ")))
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Spectrum(a) => execute("spectrum", a, &a.common, spectrum::run),
        Command::Evolve(a) => execute("evolve", a, &a.common, evolve::run),
        Command::Revival(a) => execute("revival", a, &a.common, revival::run),
        Command::Synth(a) => execute("synth", a, &a.common, synth::run),
        Command::PulsePlan(a) => execute("pulse-plan", a, &a.common, pulse::run),
        Command::Oracle(a) => execute("oracle", a, &a.common, oracle::run),
        Command::Validate(a) => execute("validate", a, &a.common, validate::run),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qudit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
