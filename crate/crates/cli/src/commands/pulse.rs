use clap::Args;
use serde::{Deserialize, Serialize};

use qudit_core::gates::{sfq_schedule, tilt_ramp_frequencies, PulseChannel, PulseSchedule, ScheduleKind};

use crate::artifact::{num, Outcome, Table};
use crate::config::{CommonArgs, Format};
use crate::error::{CliError, CliResult};

#[derive(Args, Debug, Serialize)]
pub struct PulseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// resonant-z or axis-tilt
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Final tilt angle of the axis-tilt ramp
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub pulses: Option<usize>,
    /// Drive frequency of the resonant train; defaults to the precession frequency 2 nu / hbar
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseConfig {
    pub format: Format,
    pub seed: u64,
    pub kind: String,
    pub nu: f64,
    pub hbar: f64,
    pub theta: f64,
    pub pulses: usize,
    pub omega: Option<f64>,
}

impl Default for PulseConfig {
    fn default() -> Self {
        PulseConfig {
            format: Format::Json,
            seed: 0,
            kind: "resonant-z".into(),
            nu: 1.0,
            hbar: 1.0,
            theta: std::f64::consts::FRAC_PI_4,
            pulses: 40,
            omega: None,
        }
    }
}

#[derive(Serialize)]
struct Plan {
    kind: ScheduleKind,
    frequencies: Vec<f64>,
    schedule: PulseSchedule,
}

pub fn parse_kind(s: &str) -> CliResult<ScheduleKind> {
    match s.to_ascii_lowercase().replace('_', "-").as_str() {
        "resonant-z" | "z" => Ok(ScheduleKind::ResonantZ),
        "axis-tilt" | "tilt" => Ok(ScheduleKind::AxisTilt),
        _ => Err(CliError::usage(format!("unknown schedule kind '{s}'"))),
    }
}

pub fn schedule_table(s: &PulseSchedule) -> Table {
    let mut t = Table::new(["index", "time", "channel", "area"]);
    for (k, e) in s.events.iter().enumerate() {
        let channel = match e.channel {
            PulseChannel::PhiX => "Phi_x",
            PulseChannel::PhiC => "Phi_c",
        };
        t.push(vec![k.to_string(), num(e.time), channel.into(), num(e.area)]);
    }
    t
}

pub fn run(cfg: &PulseConfig) -> CliResult<Outcome> {
    let kind = parse_kind(&cfg.kind)?;
    if !(cfg.nu > 0.0) || !(cfg.hbar > 0.0) {
        return Err(CliError::usage("nu and hbar must be positive"));
    }
    let frequencies = match kind {
        ScheduleKind::ResonantZ => vec![cfg.omega.unwrap_or(2.0 * cfg.nu / cfg.hbar)],
        ScheduleKind::AxisTilt => tilt_ramp_frequencies(cfg.nu, cfg.hbar, cfg.theta, cfg.pulses)?,
    };
    let schedule = sfq_schedule(kind, &frequencies, cfg.pulses)?;
    let table = schedule_table(&schedule);
    Outcome::new(
        Plan {
            kind,
            frequencies,
            schedule,
        },
        table,
    )
}
