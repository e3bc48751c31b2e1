//! Idealized single-flux-quantum pulse trains.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PulseChannel {
    #[serde(rename = "Phi_x")]
    PhiX,
    #[serde(rename = "Phi_c")]
    PhiC,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseEvent {
    pub time: f64,
    pub channel: PulseChannel,
    /// Pulse area in flux quanta.
    pub area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub events: Vec<PulseEvent>,
    pub total_duration: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// Fixed spacing `2 pi / omega`, locked to the qubit precession.
    ResonantZ,
    /// Spacing `2 pi / omega_i` tracking the precession frequency of each tilt step.
    AxisTilt,
}

/// Pulse times for an SFQ drive.
///
/// Times are in the reciprocal units of `omega_seq`; every pulse carries one
/// flux quantum on the bias channel.
pub fn sfq_schedule(kind: ScheduleKind, omega_seq: &[f64], n_pulses: usize) -> Result<PulseSchedule> {
    if n_pulses == 0 {
        return Err(Error::InvalidParameter("need at least one pulse".into()));
    }
    if let Some(w) = omega_seq.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidParameter(format!("pulse frequencies must be positive, got {w}")));
    }
    let spacings: Vec<f64> = match kind {
        ScheduleKind::ResonantZ => {
            if omega_seq.len() != 1 {
                return Err(Error::InvalidParameter(format!(
                    "resonant drive takes one frequency, got {}",
                    omega_seq.len()
                )));
            }
            vec![2.0 * PI / omega_seq[0]; n_pulses]
        }
        ScheduleKind::AxisTilt => {
            if omega_seq.len() != n_pulses {
                return Err(Error::DimensionMismatch {
                    expected: n_pulses,
                    found: omega_seq.len(),
                });
            }
            omega_seq.iter().map(|w| 2.0 * PI / w).collect()
        }
    };
    let mut t = 0.0;
    let events = spacings
        .iter()
        .map(|dt| {
            let e = PulseEvent {
                time: t,
                channel: PulseChannel::PhiX,
                area: 1.0,
            };
            t += dt;
            e
        })
        .collect();
    Ok(PulseSchedule {
        events,
        total_duration: t,
    })
}

/// Precession frequencies for a tilt ramp from `pi/2` to `theta_final` in `n` steps.
///
/// Step `i` sits at `theta_i = pi/2 + (theta_final - pi/2)(i+1)/n`, where the bias
/// is `delta_eps/2 = nu cot(theta_i)` and the level splitting `2 nu / sin(theta_i)`.
pub fn tilt_ramp_frequencies(nu: f64, hbar: f64, theta_final: f64, n: usize) -> Result<Vec<f64>> {
    if !(nu > 0.0) || !(hbar > 0.0) || n == 0 {
        return Err(Error::InvalidParameter("nu, hbar and the step count must be positive".into()));
    }
    if !(theta_final > 0.0 && theta_final < PI) {
        return Err(Error::InvalidParameter(format!("tilt angle must lie in (0, pi), got {theta_final}")));
    }
    Ok((0..n)
        .map(|i| {
            let theta = FRAC_PI_2 + (theta_final - FRAC_PI_2) * (i + 1) as f64 / n as f64;
            2.0 * nu / (hbar * theta.sin())
        })
        .collect())
}
