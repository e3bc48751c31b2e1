//! Gate constructions for double- and triple-well qudits.

mod pulse;
mod qutrit;
mod rotations;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::operator::{global_phase_distance, ComplexMatrix};

pub use pulse::{sfq_schedule, tilt_ramp_frequencies, PulseChannel, PulseEvent, PulseSchedule, ScheduleKind};
pub use qutrit::{
    charge_observable, commuting_gate, plan_commuting_gate, qft, revival_time_triple, su3_decompose, ternary_x_gates,
    CommutingPlan, PairRotation, Su3Decomposition,
};
pub use rotations::{
    axis_rotation, decompose_two_step, euler_five_step, hadamard, rx, rz, su2_axis_angle, tilted_rotation, AxisAngle,
    FiveStep, TwoStep,
};

/// A synthesized gate next to the matrix it is meant to realize.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub target: ComplexMatrix,
    pub achieved: ComplexMatrix,
    pub phase_distance: f64,
    pub parameters: BTreeMap<String, f64>,
}

impl GateReport {
    pub fn new(target: ComplexMatrix, achieved: ComplexMatrix, parameters: BTreeMap<String, f64>) -> Result<Self> {
        let phase_distance = global_phase_distance(&target, &achieved)?;
        Ok(Self {
            target,
            achieved,
            phase_distance,
            parameters,
        })
    }
}

pub(crate) fn params<const N: usize>(items: [(&str, f64); N]) -> BTreeMap<String, f64> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
