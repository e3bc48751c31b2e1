//! Well systems shared by spectrum, evolve and revival.

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use qudit_core::wells::{build_hamiltonian, HamiltonianSpec, PerturbationKind, PerturbationSpec, Topology};
use qudit_core::ComplexMatrix;

use crate::config::parse_json;
use crate::error::{CliError, CliResult};

#[derive(Args, Debug, Serialize)]
pub struct SystemArgs {
    /// symmetric-double, asymmetric-double, periodic-triple, fully-connected, cyclic-chain or custom
    #[arg(long)]
    pub topology: Option<String>,
    /// Tunneling amplitude
    #[arg(long)]
    pub nu: Option<f64>,
    /// Well energy difference eps_L - eps_R (asymmetric double well)
    #[arg(long, allow_hyphen_values = true)]
    pub delta_eps: Option<f64>,
    /// Number of wells (fully-connected, cyclic-chain)
    #[arg(long)]
    pub d: Option<usize>,
    /// Custom Hamiltonian as JSON rows of [re, im] pairs
    #[arg(long, value_parser = parse_json)]
    pub matrix: Option<Value>,
    /// Added generator: current, m1..m4, mp1..mp3, tilt or gell-mann
    #[arg(long)]
    pub perturbation: Option<String>,
    /// Strength of the perturbation
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Cyclic energy differences for the tilt perturbation
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tilt: Option<Vec<f64>>,
    /// Gell-Mann coefficients for the gell-mann perturbation
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coefficients: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub topology: String,
    pub nu: f64,
    pub delta_eps: f64,
    pub d: Option<usize>,
    pub matrix: Option<ComplexMatrix>,
    pub perturbation: Option<String>,
    pub epsilon: f64,
    pub tilt: Option<Vec<f64>>,
    pub coefficients: Option<Vec<f64>>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            topology: "symmetric-double".into(),
            nu: 1.0,
            delta_eps: 0.0,
            d: None,
            matrix: None,
            perturbation: None,
            epsilon: 0.0,
            tilt: None,
            coefficients: None,
        }
    }
}

/// A built system: the unperturbed spec and the full Hamiltonian.
pub struct System {
    pub spec: HamiltonianSpec,
    pub hamiltonian: ComplexMatrix,
    pub perturbed: bool,
}

impl SystemConfig {
    pub fn spec(&self) -> CliResult<HamiltonianSpec> {
        let topology: Topology = self.topology.parse()?;
        let spec = HamiltonianSpec {
            topology,
            nu: self.nu,
            delta_eps: self.delta_eps,
            d: self.d,
            custom_matrix: self.matrix.clone(),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn perturbation_kind(&self) -> CliResult<Option<PerturbationKind>> {
        let Some(name) = &self.perturbation else {
            return Ok(None);
        };
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Ok(Some(match key.as_str() {
            "none" => return Ok(None),
            "current" | "cycliccurrent" | "jc" => PerturbationKind::CyclicCurrent,
            "m1" => PerturbationKind::M1,
            "m2" => PerturbationKind::M2,
            "m3" => PerturbationKind::M3,
            "m4" => PerturbationKind::M4,
            "mp1" => PerturbationKind::Mp1,
            "mp2" => PerturbationKind::Mp2,
            "mp3" => PerturbationKind::Mp3,
            "tilt" | "diagonaltilt" => PerturbationKind::DiagonalTilt(
                self.tilt
                    .clone()
                    .ok_or_else(|| CliError::usage("the tilt perturbation needs --tilt"))?,
            ),
            "gellmann" => {
                let c = self
                    .coefficients
                    .as_ref()
                    .ok_or_else(|| CliError::usage("the gell-mann perturbation needs --coefficients"))?;
                let arr: [f64; 8] = c.as_slice().try_into().map_err(|_| {
                    CliError::usage(format!("--coefficients needs 8 values, got {}", c.len()))
                })?;
                PerturbationKind::GellMannCombination(arr)
            }
            _ => return Err(CliError::usage(format!("unknown perturbation '{name}'"))),
        }))
    }

    pub fn build(&self) -> CliResult<System> {
        let spec = self.spec()?;
        let mut hamiltonian = build_hamiltonian(&spec)?;
        let kind = self.perturbation_kind()?;
        let perturbed = kind.is_some();
        if let Some(kind) = kind {
            let p = PerturbationSpec::new(kind, self.epsilon);
            hamiltonian = hamiltonian + p.matrix(spec.dim()?)?;
        }
        Ok(System {
            spec,
            hamiltonian,
            perturbed,
        })
    }
}
