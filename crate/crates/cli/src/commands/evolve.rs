use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qudit_core::dynamics::{evolution_trace, QuantumState};
use qudit_core::wells::modular_momentum_states;

use crate::artifact::{num, Outcome, Table};
use crate::config::{CommonArgs, Format};
use crate::error::{CliError, CliResult};
use crate::system::{SystemArgs, SystemConfig};

#[derive(Args, Debug, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// End of the time grid
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of intervals; the trace has steps + 1 samples
    #[arg(long)]
    pub steps: Option<usize>,
    /// well-K, uniform, current-plus, current-minus or custom
    #[arg(long)]
    pub initial: Option<String>,
    /// Amplitudes for the custom state, as re,im,re,im,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub amplitudes: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub format: Format,
    pub seed: u64,
    pub system: SystemConfig,
    pub hbar: f64,
    pub t_max: f64,
    pub steps: usize,
    pub initial: String,
    pub amplitudes: Option<Vec<f64>>,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            format: Format::Csv,
            seed: 0,
            system: SystemConfig::default(),
            hbar: 1.0,
            t_max: 10.0,
            steps: 200,
            initial: "well-0".into(),
            amplitudes: None,
        }
    }
}

#[derive(Serialize)]
struct Sample {
    t: f64,
    amplitudes: QuantumState,
    populations: Vec<f64>,
    fidelity: f64,
}

#[derive(Serialize)]
struct Trace {
    initial: QuantumState,
    samples: Vec<Sample>,
}

fn initial_state(cfg: &EvolveConfig, dim: usize) -> CliResult<QuantumState> {
    let name = cfg.initial.to_ascii_lowercase();
    let current = |n: usize| -> CliResult<QuantumState> {
        if dim < 3 {
            return Err(CliError::usage("current states need at least three wells"));
        }
        let states = modular_momentum_states(dim, 1.0, cfg.hbar)?;
        Ok(QuantumState::new(states[n].vector.clone())?)
    };
    match name.as_str() {
        "uniform" => Ok(QuantumState::uniform(dim)?),
        "current-plus" => current(1),
        "current-minus" => current(dim - 1),
        "custom" => {
            let a = cfg
                .amplitudes
                .as_ref()
                .ok_or_else(|| CliError::usage("the custom state needs --amplitudes"))?;
            if a.len() != 2 * dim {
                return Err(CliError::usage(format!(
                    "custom state needs {} numbers (re, im per level), got {}",
                    2 * dim,
                    a.len()
                )));
            }
            let amps: Vec<Complex64> = a.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
            Ok(QuantumState::from_slice(&amps)?)
        }
        _ => {
            let k = name
                .strip_prefix("well-")
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| CliError::usage(format!("unknown initial state '{}'", cfg.initial)))?;
            Ok(QuantumState::basis(dim, k)?)
        }
    }
}

pub fn run(cfg: &EvolveConfig) -> CliResult<Outcome> {
    if cfg.steps == 0 {
        return Err(CliError::usage("time grid needs at least one step"));
    }
    if !(cfg.t_max > 0.0 && cfg.t_max.is_finite()) {
        return Err(CliError::usage(format!("t_max must be positive, got {}", cfg.t_max)));
    }
    let sys = cfg.system.build()?;
    let dim = sys.hamiltonian.dim();
    let psi0 = initial_state(cfg, dim)?;
    let times: Vec<f64> = (0..=cfg.steps)
        .map(|k| cfg.t_max * k as f64 / cfg.steps as f64)
        .collect();
    let trace = evolution_trace(&sys.hamiltonian, &psi0, &times, cfg.hbar)?;

    let mut columns = vec!["t".to_string()];
    columns.extend((0..dim).flat_map(|k| [format!("re{k}"), format!("im{k}")]));
    columns.extend((0..dim).map(|k| format!("p{k}")));
    columns.push("fidelity".into());
    let mut table = Table::new(columns);

    let mut samples = Vec::with_capacity(trace.len());
    for (t, psi) in trace {
        let fidelity = psi0.overlap_probability(&psi)?;
        let populations = psi.populations();
        let mut row = vec![num(t)];
        row.extend(psi.amplitudes().iter().flat_map(|z| [num(z.re), num(z.im)]));
        row.extend(populations.iter().map(|p| num(*p)));
        row.push(num(fidelity));
        table.push(row);
        samples.push(Sample {
            t,
            amplitudes: psi,
            populations,
            fidelity,
        });
    }
    Outcome::new(
        Trace {
            initial: psi0,
            samples,
        },
        table,
    )
}
