use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use clap::Args;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use qudit_core::gates::{
    commuting_gate, decompose_two_step, euler_five_step, hadamard, plan_commuting_gate, qft, sfq_schedule,
    su2_axis_angle, su3_decompose, tilt_ramp_frequencies, tilted_rotation, ternary_x_gates, GateReport,
    PulseEvent, PulseSchedule, ScheduleKind,
};
use qudit_core::operator::{global_phase_distance, haar_special_unitary, haar_unitary, pauli};
use qudit_core::ComplexMatrix;

use super::pulse::schedule_table;
use crate::artifact::{num, Outcome, Table};
use crate::config::{parse_json, CommonArgs, Format};
use crate::error::{CliError, CliResult};

/// Largest accepted phase distance between target and synthesized gate.
const SYNTH_TOL: f64 = 1e-9;
const UNITARY_TOL: f64 = 1e-9;
/// Axis components below this count as zero.
const AXIS_TOL: f64 = 1e-9;

#[derive(Args, Debug, Serialize)]
pub struct SynthArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// identity, hadamard, not, y, z, s, t, qft3, x01, x02, x12, identity3, haar2, haar3 or custom
    #[arg(long)]
    pub target: Option<String>,
    /// Target for --target custom, as JSON rows of [re, im] pairs
    #[arg(long, value_parser = parse_json)]
    pub matrix: Option<Value>,
    /// auto, two-step, five-step, tilted, su3 or commuting
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Nominal perturbation strength for the commuting method
    #[arg(long)]
    pub eps: Option<f64>,
    /// Emit the SFQ pulse schedule of a two-step synthesis
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub pulses: Option<bool>,
    /// Pulses per axis-tilt ramp
    #[arg(long)]
    pub ramp_pulses: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub format: Format,
    pub seed: u64,
    pub target: String,
    pub matrix: Option<ComplexMatrix>,
    pub method: String,
    pub nu: f64,
    pub hbar: f64,
    pub eps: f64,
    pub pulses: bool,
    pub ramp_pulses: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            format: Format::Json,
            seed: 0,
            target: "hadamard".into(),
            matrix: None,
            method: "auto".into(),
            nu: 1.0,
            hbar: 1.0,
            eps: 0.05,
            pulses: false,
            ramp_pulses: 8,
        }
    }
}

#[derive(Serialize)]
struct Synthesis {
    target: String,
    method: String,
    report: GateReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    factors: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    schedule: Option<PulseSchedule>,
}

fn named_target(cfg: &SynthConfig) -> CliResult<ComplexMatrix> {
    let name = cfg.target.to_ascii_lowercase();
    if name != "custom" && cfg.matrix.is_some() {
        return Err(CliError::usage("a target matrix needs --target custom"));
    }
    let diag = |z: Complex64| ComplexMatrix::diagonal_complex(&[Complex64::new(1.0, 0.0), z]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x = ternary_x_gates();
    Ok(match name.as_str() {
        "identity" | "i" => ComplexMatrix::identity(2),
        "identity3" => ComplexMatrix::identity(3),
        "hadamard" | "h" => hadamard(),
        "not" | "x" => pauli(1)?,
        "y" => pauli(2)?,
        "z" => pauli(3)?,
        "s" => diag(Complex64::new(0.0, 1.0)),
        "t" => diag(Complex64::from_polar(1.0, FRAC_PI_4)),
        "qft3" | "qft" => qft(3)?,
        "x01" => x[0].clone(),
        "x02" => x[1].clone(),
        "x12" => x[2].clone(),
        "haar2" => haar_special_unitary(2, &mut rng),
        "haar3" => haar_unitary(3, &mut rng),
        "custom" => cfg
            .matrix
            .clone()
            .ok_or_else(|| CliError::usage("--target custom needs --matrix"))?,
        _ => return Err(CliError::usage(format!("unknown target '{}'", cfg.target))),
    })
}

fn need_dim(u: &ComplexMatrix, dim: usize, method: &str) -> CliResult<()> {
    if u.dim() != dim {
        return Err(CliError::usage(format!(
            "method {method} needs a {dim}x{dim} target, got {0}x{0}",
            u.dim()
        )));
    }
    Ok(())
}

/// Axis-tilt ramp to each step's axis followed by a free precession through
/// the step angle; steps about z use a resonant train instead.
fn two_step_schedule(steps: [(f64, f64); 2], cfg: &SynthConfig) -> CliResult<PulseSchedule> {
    let mut events: Vec<PulseEvent> = Vec::new();
    let mut clock = 0.0;
    for (theta, phi) in steps {
        if phi.abs() < AXIS_TOL {
            continue;
        }
        let on_z = theta.sin().abs() < AXIS_TOL;
        let (part, omega) = if on_z {
            let w = 2.0 * cfg.nu / cfg.hbar;
            (sfq_schedule(ScheduleKind::ResonantZ, &[w], cfg.ramp_pulses)?, w)
        } else {
            let w = tilt_ramp_frequencies(cfg.nu, cfg.hbar, theta, cfg.ramp_pulses)?;
            let last = *w.last().expect("nonempty ramp");
            (sfq_schedule(ScheduleKind::AxisTilt, &w, cfg.ramp_pulses)?, last)
        };
        events.extend(part.events.iter().map(|e| PulseEvent {
            time: e.time + clock,
            ..*e
        }));
        clock += part.total_duration + phi.rem_euclid(4.0 * PI) / omega;
    }
    Ok(PulseSchedule {
        events,
        total_duration: clock,
    })
}

pub fn run(cfg: &SynthConfig) -> CliResult<Outcome> {
    let target = named_target(cfg)?;
    let dev = target.unitarity_deviation();
    if dev > UNITARY_TOL {
        return Err(CliError::usage(format!("target is not unitary (deviation {dev:e})")));
    }
    let method = match cfg.method.to_ascii_lowercase().as_str() {
        "auto" if target.dim() == 2 => "two-step".to_string(),
        "auto" if target.dim() == 3 => "su3".to_string(),
        "auto" => return Err(CliError::usage("only 2x2 and 3x3 targets can be synthesized")),
        m => m.to_string(),
    };
    let mut factors = None;
    let mut schedule = None;
    let report = match method.as_str() {
        "two-step" => {
            need_dim(&target, 2, &method)?;
            let t = decompose_two_step(&target)?;
            if cfg.pulses {
                schedule = Some(two_step_schedule([(t.theta1, t.phi1), (t.theta2, t.phi2)], cfg)?);
            }
            t.report
        }
        "five-step" => {
            need_dim(&target, 2, &method)?;
            let (eta, aa) = su2_axis_angle(&target)?;
            let f = euler_five_step(&aa)?;
            let mut p = f.report.parameters.clone();
            p.insert("eta".into(), eta);
            let achieved = f.report.achieved.scale(Complex64::from_polar(1.0, eta));
            GateReport::new(target.clone(), achieved, p)?
        }
        "tilted" => {
            need_dim(&target, 2, &method)?;
            let (eta, aa) = su2_axis_angle(&target)?;
            let [nx, ny, nz] = aa.axis;
            if ny.abs() > AXIS_TOL {
                return Err(CliError::usage(
                    "target axis leaves the XZ plane; use the two-step method",
                ));
            }
            let theta = nx.atan2(nz);
            let achieved = tilted_rotation(theta, aa.angle).scale(Complex64::from_polar(1.0, eta));
            let p = BTreeMap::from([
                ("theta".to_string(), theta),
                ("alpha".to_string(), aa.angle),
                ("eta".to_string(), eta),
            ]);
            GateReport::new(target.clone(), achieved, p)?
        }
        "su3" => {
            need_dim(&target, 3, &method)?;
            let s = su3_decompose(&target)?;
            factors = Some(serde_json::to_value([&s.r01, &s.r02, &s.r12])?);
            s.report
        }
        "commuting" => {
            need_dim(&target, 3, &method)?;
            let x = ternary_x_gates();
            let mut which = None;
            for (k, g) in x.iter().enumerate() {
                if global_phase_distance(&target, g)? <= SYNTH_TOL {
                    which = Some(k + 1);
                }
            }
            let i = which.ok_or_else(|| {
                CliError::usage("the commuting method realizes only x01, x02 and x12")
            })?;
            let plan = plan_commuting_gate(FRAC_PI_2, cfg.eps, cfg.nu, cfg.hbar)?;
            let r = commuting_gate(i, plan.epsilon, plan.cycles, cfg.nu, cfg.hbar)?;
            let mut p = r.parameters.clone();
            p.insert("eps_t_total".into(), plan.epsilon * plan.t_total / cfg.hbar);
            GateReport::new(target.clone(), r.achieved, p)?
        }
        other => return Err(CliError::usage(format!("unknown method '{other}'"))),
    };

    let mut table = Table::new(["name", "value"]);
    for (k, v) in &report.parameters {
        table.push(vec![k.clone(), num(*v)]);
    }
    table.push(vec!["phase_distance".into(), num(report.phase_distance)]);
    if let Some(s) = &schedule {
        // the schedule has its own layout; CSV carries it after the parameters
        for row in schedule_table(s).rows {
            table.push(vec![format!("pulse{}_{}", row[0], row[2]), row[1].clone()]);
        }
    }
    let distance = report.phase_distance;
    let mut out = Outcome::new(
        Synthesis {
            target: cfg.target.clone(),
            method,
            report,
            factors,
            schedule,
        },
        table,
    )?;
    out.check(distance <= SYNTH_TOL, || {
        format!("synthesized gate is {distance:e} from the target")
    });
    Ok(out)
}
