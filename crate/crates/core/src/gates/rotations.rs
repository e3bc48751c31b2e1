//! Single-qubit rotations, `R = exp(-i (alpha/2) n.sigma)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::{params, GateReport};
use crate::error::{Error, Result};
use crate::operator::{pauli, ComplexMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl AxisAngle {
    /// Normalizes `axis`.
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(n > 0.0) || !n.is_finite() || !angle.is_finite() {
            return Err(Error::InvalidParameter(format!("bad rotation axis {axis:?} or angle {angle}")));
        }
        Ok(Self {
            axis: [axis[0] / n, axis[1] / n, axis[2] / n],
            angle,
        })
    }

    /// Axis `(sin t cos p, sin t sin p, cos t)`.
    pub fn from_polar(theta: f64, psi: f64, angle: f64) -> Self {
        Self {
            axis: [theta.sin() * psi.cos(), theta.sin() * psi.sin(), theta.cos()],
            angle,
        }
    }

    /// `(theta, psi)` of the axis; `psi = 0` on the z axis.
    pub fn polar(&self) -> (f64, f64) {
        let [x, y, z] = self.axis;
        (x.hypot(y).atan2(z), y.atan2(x))
    }

    pub fn matrix(&self) -> ComplexMatrix {
        axis_rotation(self.axis, self.angle)
    }
}

/// `cos(a/2) I - i sin(a/2) n.sigma` for a unit vector `n`.
pub fn axis_rotation(n: [f64; 3], alpha: f64) -> ComplexMatrix {
    let (c, s) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
    let entries = [
        C64::new(c, -s * n[2]),
        C64::new(-s * n[1], -s * n[0]),
        C64::new(s * n[1], -s * n[0]),
        C64::new(c, s * n[2]),
    ];
    ComplexMatrix::from_row_slice(2, &entries).expect("2x2")
}

pub fn rx(alpha: f64) -> ComplexMatrix {
    axis_rotation([1.0, 0.0, 0.0], alpha)
}

pub fn rz(alpha: f64) -> ComplexMatrix {
    axis_rotation([0.0, 0.0, 1.0], alpha)
}

/// Rotation about `sin(theta) x + cos(theta) z`.
pub fn tilted_rotation(theta: f64, alpha: f64) -> ComplexMatrix {
    if !(theta > 0.0 && theta < PI) {
        log::warn!("tilt angle {theta} lies outside (0, pi), which is not reachable by biasing the wells");
    }
    let (c, s) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
    let field = pauli(1).expect("sigma_x").scale_real(theta.sin()) + pauli(3).expect("sigma_z").scale_real(theta.cos());
    ComplexMatrix::identity(2).scale_real(c) - field.scale(C64::new(0.0, s))
}

pub fn hadamard() -> ComplexMatrix {
    let h = 1.0 / 2f64.sqrt();
    ComplexMatrix::from_real_row_slice(2, &[h, h, h, -h]).expect("2x2")
}

/// Splits a 2x2 unitary into `exp(i eta)` times an SU(2) rotation.
///
/// The rotation angle is returned in `[0, 2 pi]`, so the sign ambiguity of the
/// SU(2) lift is absorbed into `eta`.
pub fn su2_axis_angle(u: &ComplexMatrix) -> Result<(f64, AxisAngle)> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    check_unitary(u)?;
    let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
    let eta = det.arg() / 2.0;
    let v = u.scale(C64::from_polar(1.0, -eta));
    // v = [[a, b], [-b*, a*]] = cos(p/2) I - i sin(p/2) n.sigma
    let (a, b) = (v.get(0, 0), v.get(0, 1));
    let c = a.re;
    let sn = [-b.im, -b.re, -a.im];
    let s = (sn[0] * sn[0] + sn[1] * sn[1] + sn[2] * sn[2]).sqrt();
    let angle = 2.0 * s.atan2(c);
    let axis = if s > 0.0 {
        [sn[0] / s, sn[1] / s, sn[2] / s]
    } else {
        [0.0, 0.0, 1.0]
    };
    Ok((eta, AxisAngle { axis, angle }))
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let dev = u.unitarity_deviation();
    if dev > 1e-9 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    Ok(())
}

/// `Rz(psi') Rx(theta) Rz(alpha) Rx(-theta) Rz(-psi')`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiveStep {
    pub psi_prime: f64,
    pub theta: f64,
    pub alpha: f64,
    pub report: GateReport,
}

impl FiveStep {
    pub fn product(psi_prime: f64, theta: f64, alpha: f64) -> ComplexMatrix {
        rz(psi_prime) * rx(theta) * rz(alpha) * rx(-theta) * rz(-psi_prime)
    }
}

/// Five-step realization of an arbitrary rotation from x and z rotations.
///
/// `Rx(theta)` carries z to `(0, -sin t, cos t)`, so the outer z rotation must
/// advance the azimuth by `pi/2`: `psi' = psi + pi/2`.
pub fn euler_five_step(target: &AxisAngle) -> Result<FiveStep> {
    let target = AxisAngle::new(target.axis, target.angle)?;
    let (theta, psi) = target.polar();
    let psi_prime = psi + FRAC_PI_2;
    let achieved = FiveStep::product(psi_prime, theta, target.angle);
    let report = GateReport::new(
        target.matrix(),
        achieved,
        params([("psi_prime", psi_prime), ("theta", theta), ("alpha", target.angle)]),
    )?;
    Ok(FiveStep {
        psi_prime,
        theta,
        alpha: target.angle,
        report,
    })
}

/// `exp(i eta) R_{theta2}(phi2) R_{theta1}(phi1)` with both axes in the XZ plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoStep {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
    pub eta: f64,
    pub report: GateReport,
}

impl TwoStep {
    pub fn product(theta1: f64, phi1: f64, theta2: f64, phi2: f64, eta: f64) -> ComplexMatrix {
        let r1 = axis_rotation([theta1.sin(), 0.0, theta1.cos()], phi1);
        let r2 = axis_rotation([theta2.sin(), 0.0, theta2.cos()], phi2);
        (r2 * r1).scale(C64::from_polar(1.0, eta))
    }
}

/// Tolerance below which the rotation axis counts as lying in the XZ plane.
const XZ_PLANE_TOL: f64 = 1e-12;

/// Two rotations about XZ-plane axes reproducing a 2x2 unitary.
///
/// Five parameters against three constraints; the solution is made unique as
/// follows. When the target axis already lies in the XZ plane both steps use
/// it, each turning by half the angle. Otherwise the first axis is x and its
/// angle is the one that removes the y component of the remaining rotation,
/// which leaves the second step in closed form.
pub fn decompose_two_step(target: &ComplexMatrix) -> Result<TwoStep> {
    let (eta, aa) = su2_axis_angle(target)?;
    let [nx, ny, nz] = aa.axis;
    let phi = aa.angle;
    let (theta1, phi1, theta2, phi2) = if phi.abs() < 1e-300 {
        (0.0, 0.0, 0.0, 0.0)
    } else if ny.abs() <= XZ_PLANE_TOL {
        let (mut nx, mut nz, mut phi) = (nx, nz, phi);
        if nx < 0.0 {
            nx = -nx;
            nz = -nz;
            phi = -phi;
        }
        let theta = nx.atan2(nz);
        (theta, phi / 2.0, theta, phi / 2.0)
    } else {
        let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
        let rho = ny.hypot(nz);
        let phi1 = 2.0 * ny.atan2(nz);
        let (c1, s1) = (nz / rho, ny / rho);
        let u = s * rho;
        let w = -s1 * c + c1 * s * nx;
        let c2 = c1 * c + s1 * s * nx;
        let s2 = u.hypot(w);
        let mut phi2 = 2.0 * s2.atan2(c2);
        let mut theta2 = w.atan2(u);
        if theta2 < 0.0 {
            theta2 += PI;
            phi2 = -phi2;
        }
        (FRAC_PI_2, phi1, theta2, phi2)
    };
    let achieved = TwoStep::product(theta1, phi1, theta2, phi2, eta);
    let report = GateReport::new(
        target.clone(),
        achieved,
        params([
            ("theta1", theta1),
            ("phi1", phi1),
            ("theta2", theta2),
            ("phi2", phi2),
            ("eta", eta),
        ]),
    )?;
    Ok(TwoStep {
        theta1,
        phi1,
        theta2,
        phi2,
        eta,
        report,
    })
}
