use std::f64::consts::PI;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qudit_core::dynamics::revival_period;
use qudit_core::gates::{
    commuting_gate, decompose_two_step, euler_five_step, hadamard, qft, su2_axis_angle, su3_decompose,
    tilted_rotation,
};
use qudit_core::operator::{global_phase_distance, haar_special_unitary, haar_unitary, spectrum};
use qudit_core::wells::{analytic_spectrum, build_hamiltonian, cyclic_current, HamiltonianSpec};
use qudit_core::ComplexMatrix;

use crate::artifact::{num, Outcome, Table};
use crate::config::{CommonArgs, Format};
use crate::error::{CliError, CliResult};

#[derive(Args, Debug, Serialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// Random targets per decomposition suite
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub nu: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    pub format: Format,
    pub seed: u64,
    pub samples: usize,
    pub nu: f64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig {
            format: Format::Json,
            seed: 0,
            samples: 100,
            nu: 1.0,
        }
    }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
    pass: bool,
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn spectra(nu: f64) -> CliResult<f64> {
    let mut specs = vec![
        HamiltonianSpec::symmetric_double(nu),
        HamiltonianSpec::asymmetric_double(nu, 0.7 * nu),
        HamiltonianSpec::periodic_triple(nu),
    ];
    specs.extend((2..=8).map(|d| HamiltonianSpec::fully_connected(d, nu)));
    specs.extend((2..=12).map(|d| HamiltonianSpec::cyclic_chain(d, nu)));
    let mut worst: f64 = 0.0;
    for s in &specs {
        let numeric = spectrum(&build_hamiltonian(s)?)?.eigenvalues;
        let exact = analytic_spectrum(s)?;
        for (a, b) in numeric.iter().zip(&exact) {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Worst relative period error for d = 2, 3, plus the identity distance of
/// the cyclic d = 4, 6 revivals; infinite when a revival is missed.
fn revivals(nu: f64) -> CliResult<(f64, bool)> {
    let mut worst: f64 = 0.0;
    let expected = [
        (HamiltonianSpec::symmetric_double(nu), PI / nu),
        (HamiltonianSpec::periodic_triple(nu), 2.0 * PI / (3.0 * nu)),
    ];
    for (spec, t) in expected {
        let r = revival_period(&build_hamiltonian(&spec)?, 1.0, 1e-9, 10_000)?;
        worst = worst.max(r.period.map_or(f64::INFINITY, |p| (p - t).abs() / t));
    }
    for d in [4, 6] {
        let r = revival_period(&build_hamiltonian(&HamiltonianSpec::cyclic_chain(d, nu))?, 1.0, 1e-9, 10_000)?;
        worst = worst.max(if r.found { r.phase_distance } else { f64::INFINITY });
    }
    let ring5 = revival_period(&build_hamiltonian(&HamiltonianSpec::cyclic_chain(5, nu))?, 1.0, 1e-9, 10_000)?;
    Ok((worst, !ring5.found))
}

fn current_structure() -> CliResult<f64> {
    let j = cyclic_current(3)?;
    let s = spectrum(&j)?;
    let r3 = 3f64.sqrt();
    let mut worst = max_of(s.eigenvalues.iter().zip([-r3, 0.0, r3]).map(|(a, b)| (a - b).abs()));
    let f = qft(3)?;
    let (q, _) = qudit_core::gates::charge_observable(3)?;
    for k in 0..3 {
        let v = f.column(k);
        for op in [&j, &q] {
            let w = op.apply(&v);
            let lambda = v.dotc(&w);
            worst = worst.max((&w - &v * lambda).norm());
        }
    }
    for d in 3..=8 {
        let h = build_hamiltonian(&HamiltonianSpec::cyclic_chain(d, 1.0))?;
        worst = worst.max(h.commutator(&cyclic_current(d)?).max_abs());
    }
    Ok(worst)
}

fn qft_identities() -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for d in 2..=9 {
        let f = qft(d)?;
        let f2 = &f * &f;
        let reversal: Vec<usize> = (0..d).map(|j| (d - j) % d).collect();
        worst = worst.max(f2.max_abs_diff(&ComplexMatrix::permutation(&reversal)?));
        worst = worst.max((&f2 * &f2).max_abs_diff(&ComplexMatrix::identity(d)));
    }
    Ok(worst)
}

pub fn run(cfg: &ValidateConfig) -> CliResult<Outcome> {
    if cfg.samples == 0 {
        return Err(CliError::usage("need at least one sample"));
    }
    if !(cfg.nu > 0.0) {
        return Err(CliError::usage("nu must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut two = 0.0f64;
    let mut five = 0.0f64;
    for _ in 0..cfg.samples {
        let u = haar_special_unitary(2, &mut rng);
        two = two.max(decompose_two_step(&u)?.report.phase_distance);
        let (_, aa) = su2_axis_angle(&u)?;
        five = five.max(euler_five_step(&aa)?.report.phase_distance);
    }
    let mut su3 = 0.0f64;
    for _ in 0..cfg.samples {
        su3 = su3.max(su3_decompose(&haar_unitary(3, &mut rng))?.report.phase_distance);
    }
    let mut commuting = 0.0f64;
    for _ in 0..cfg.samples {
        let i = rng.random_range(1..=3);
        let eps = rng.random_range(0.001..0.1) * cfg.nu;
        let cycles = rng.random_range(1..50);
        commuting = commuting.max(commuting_gate(i, eps, cycles, cfg.nu, 1.0)?.phase_distance);
    }
    let had = global_phase_distance(&tilted_rotation(PI / 4.0, PI), &hadamard())?;
    let (revival, ring5_missing) = revivals(cfg.nu)?;

    let checks = [
        ("analytic_spectra", spectra(cfg.nu)?, 1e-12),
        ("revival_periods", revival, 1e-10),
        ("irrational_ring_has_no_revival", if ring5_missing { 0.0 } else { 1.0 }, 0.5),
        ("two_step_round_trip", two, 1e-9),
        ("five_step_round_trip", five, 1e-9),
        ("su3_round_trip", su3, 1e-9),
        ("hadamard_from_tilt", had, 1e-12),
        ("commuting_gate_exactness", commuting, 1e-11),
        ("current_and_charge", current_structure()?, 1e-12),
        ("qft_identities", qft_identities()?, 1e-12),
    ]
    .map(|(name, value, tolerance)| Check {
        name,
        value,
        tolerance,
        pass: value <= tolerance,
    });

    let mut table = Table::new(["check", "value", "tolerance", "pass"]);
    for c in &checks {
        table.push(vec![c.name.into(), num(c.value), num(c.tolerance), c.pass.to_string()]);
    }
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} = {:e} above {:e}", c.name, c.value, c.tolerance))
        .collect();
    let mut out = Outcome::new(checks, table)?;
    out.failures = failed;
    Ok(out)
}
