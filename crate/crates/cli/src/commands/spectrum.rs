use clap::Args;
use serde::{Deserialize, Serialize};

use qudit_core::operator::spectrum;
use qudit_core::wells::analytic_spectrum;

use crate::artifact::{num, Outcome, Table};
use crate::config::{CommonArgs, Format};
use crate::error::CliResult;
use crate::system::{SystemArgs, SystemConfig};

/// Largest accepted difference between numeric and closed-form eigenvalues.
const RESIDUAL_LIMIT: f64 = 1e-9;

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub system: SystemArgs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub format: Format,
    pub seed: u64,
    pub system: SystemConfig,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            format: Format::Json,
            seed: 0,
            system: SystemConfig::default(),
        }
    }
}

#[derive(Serialize)]
struct Level {
    energy: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct SpectrumResult {
    dim: usize,
    eigenvalues: Vec<f64>,
    levels: Vec<Level>,
    degeneracy_groups: Vec<Vec<usize>>,
    analytic: Option<Vec<f64>>,
    residual: Option<f64>,
}

pub fn run(cfg: &SpectrumConfig) -> CliResult<Outcome> {
    let sys = cfg.system.build()?;
    let s = spectrum(&sys.hamiltonian)?;
    // closed forms exist only for the unperturbed built-in topologies
    let analytic = if sys.perturbed || sys.spec.custom_matrix.is_some() {
        None
    } else {
        Some(analytic_spectrum(&sys.spec)?)
    };
    let residual = analytic.as_ref().map(|a| {
        s.eigenvalues
            .iter()
            .zip(a)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    });

    let mut group_of = vec![0; s.dim()];
    for (g, members) in s.degeneracy_groups.iter().enumerate() {
        for &k in members {
            group_of[k] = g;
        }
    }
    let mut table = Table::new(["index", "eigenvalue", "analytic", "group"]);
    for (k, e) in s.eigenvalues.iter().enumerate() {
        let a = analytic.as_ref().map_or(String::new(), |a| num(a[k]));
        table.push(vec![k.to_string(), num(*e), a, group_of[k].to_string()]);
    }

    let result = SpectrumResult {
        dim: s.dim(),
        eigenvalues: s.eigenvalues.clone(),
        levels: s
            .levels()
            .into_iter()
            .map(|(energy, multiplicity)| Level { energy, multiplicity })
            .collect(),
        degeneracy_groups: s.degeneracy_groups.clone(),
        analytic,
        residual,
    };
    let mut out = Outcome::new(result, table)?;
    if let Some(r) = residual {
        out.check(r <= RESIDUAL_LIMIT, || {
            format!("numeric and analytic spectra differ by {r:e}")
        });
    }
    Ok(out)
}
