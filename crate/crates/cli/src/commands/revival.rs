use clap::Args;
use serde::{Deserialize, Serialize};

use qudit_core::dynamics::{revival_period, DEFAULT_MAX_HARMONIC, DEFAULT_REVIVAL_TOL};

use crate::artifact::{num, Outcome, Table};
use crate::config::{CommonArgs, Format};
use crate::error::CliResult;
use crate::system::{SystemArgs, SystemConfig};

#[derive(Args, Debug, Serialize)]
pub struct RevivalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Accepted distance of U(T) from the identity, up to phase
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest multiple of the smallest gap searched
    #[arg(long)]
    pub max_harmonic: Option<u64>,
    /// Exit with status 3 when no revival is found
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub strict: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RevivalConfig {
    pub format: Format,
    pub seed: u64,
    pub system: SystemConfig,
    pub hbar: f64,
    pub tol: f64,
    pub max_harmonic: u64,
    pub strict: bool,
}

impl Default for RevivalConfig {
    fn default() -> Self {
        RevivalConfig {
            format: Format::Json,
            seed: 0,
            system: SystemConfig::default(),
            hbar: 1.0,
            tol: DEFAULT_REVIVAL_TOL,
            max_harmonic: DEFAULT_MAX_HARMONIC,
            strict: false,
        }
    }
}

pub fn run(cfg: &RevivalConfig) -> CliResult<Outcome> {
    let sys = cfg.system.build()?;
    let r = revival_period(&sys.hamiltonian, cfg.hbar, cfg.tol, cfg.max_harmonic)?;
    let mut table = Table::new(["found", "period", "fidelity_at_period", "phase_distance", "harmonic"]);
    table.push(vec![
        r.found.to_string(),
        r.period.map_or(String::new(), num),
        num(r.fidelity_at_period),
        num(r.phase_distance),
        r.harmonic.to_string(),
    ]);
    let found = r.found;
    let mut out = Outcome::new(r, table)?;
    if cfg.strict {
        out.check(found, || "no revival within the search bound".into());
    }
    Ok(out)
}
