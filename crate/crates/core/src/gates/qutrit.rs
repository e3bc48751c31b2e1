//! Qutrit gates of the periodic triple well.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::rotations::su2_axis_angle;
use super::{params, AxisAngle, GateReport};
use crate::error::{Error, Result};
use crate::operator::{unitary_exp, ComplexMatrix, C64, ONE, ZERO};
use crate::wells::{build_hamiltonian, shifted_generators, HamiltonianSpec};

/// `2 pi hbar / (3 nu)`, the revival time of the triple well.
pub fn revival_time_triple(nu: f64, hbar: f64) -> f64 {
    2.0 * PI * hbar / (3.0 * nu)
}

/// Ratio `eps / nu` above which the perturbation is no longer small.
const WEAK_PERTURBATION_LIMIT: f64 = 0.2;

/// Propagator of `H_3 + eps M'_i` over `cycles` revival times, against `exp(-i theta M'_i)`.
///
/// `M'_i` squares to the identity, so the target is `cos(theta) I - i sin(theta) M'_i`
/// with `theta = eps T / hbar`.
pub fn commuting_gate(i: usize, eps: f64, cycles: u32, nu: f64, hbar: f64) -> Result<GateReport> {
    if !(1..=3).contains(&i) {
        return Err(Error::IndexOutOfRange {
            what: "commuting generator",
            index: i,
            min: 1,
            max: 3,
        });
    }
    if !(nu > 0.0) || !(hbar > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter("nu and hbar must be positive, eps finite".into()));
    }
    if eps.abs() / nu > WEAK_PERTURBATION_LIMIT {
        log::warn!(
            "eps/nu = {:.3} exceeds {WEAK_PERTURBATION_LIMIT}; the perturbation is not weak",
            eps.abs() / nu
        );
    }
    let m = shifted_generators()[i - 1].clone();
    let h3 = build_hamiltonian(&HamiltonianSpec::periodic_triple(nu))?;
    let t_rev = revival_time_triple(nu, hbar);
    let t_total = cycles as f64 * t_rev;
    let theta = eps * t_total / hbar;
    let target = ComplexMatrix::identity(3).scale_real(theta.cos()) - m.scale(C64::new(0.0, theta.sin()));
    let achieved = unitary_exp(&(&h3 + m.scale_real(eps)), t_total, hbar)?;
    GateReport::new(
        target,
        achieved,
        params([
            ("generator", i as f64),
            ("epsilon", eps),
            ("cycles", cycles as f64),
            ("t_rev", t_rev),
            ("t_total", t_total),
            ("theta", theta),
        ]),
    )
}

/// Whole-cycle schedule reaching a gate angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutingPlan {
    pub cycles: u32,
    /// Perturbation strength adjusted so that `cycles` revivals give exactly `theta`.
    pub epsilon: f64,
    pub t_total: f64,
}

/// Picks the number of revival cycles closest to `theta / (eps T_rev / hbar)`.
pub fn plan_commuting_gate(theta: f64, eps_nominal: f64, nu: f64, hbar: f64) -> Result<CommutingPlan> {
    if !(eps_nominal > 0.0) || !(nu > 0.0) || !(hbar > 0.0) || !theta.is_finite() || theta == 0.0 {
        return Err(Error::InvalidParameter(
            "need eps, nu, hbar > 0 and a nonzero gate angle".into(),
        ));
    }
    let t_rev = revival_time_triple(nu, hbar);
    let raw = (theta.abs() * hbar / (eps_nominal * t_rev)).round().max(1.0);
    if raw > u32::MAX as f64 {
        return Err(Error::InvalidParameter("gate needs too many revival cycles".into()));
    }
    let cycles = raw as u32;
    let t_total = cycles as f64 * t_rev;
    Ok(CommutingPlan {
        cycles,
        epsilon: theta * hbar / t_total,
        t_total,
    })
}

/// `X^(01)`, `X^(02)`, `X^(12)`.
pub fn ternary_x_gates() -> [ComplexMatrix; 3] {
    shifted_generators()
}

/// Normalized discrete Fourier transform, `F_jk = w^(jk) / sqrt(d)` with `w = exp(2 pi i / d)`.
pub fn qft(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("QFT needs d >= 2, got {d}")));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let entries: Vec<C64> = (0..d * d)
        .map(|idx| {
            let (j, k) = (idx / d, idx % d);
            C64::from_polar(norm, 2.0 * PI * ((j * k) % d) as f64 / d as f64)
        })
        .collect();
    ComplexMatrix::from_row_slice(d, &entries)
}

/// Charge operator `F diag(0, 1, -1) F^dagger` in units of `2e`, with its eigenvalues.
pub fn charge_observable(d: usize) -> Result<(ComplexMatrix, Vec<f64>)> {
    if d != 3 {
        return Err(Error::InvalidParameter(format!("charge basis is defined for d = 3, got {d}")));
    }
    let f = qft(3)?;
    let q = &f * ComplexMatrix::diagonal(&[0.0, 1.0, -1.0]) * f.adjoint();
    Ok((q, vec![-1.0, 0.0, 1.0]))
}

/// A unitary acting on one pair of qutrit levels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRotation {
    pub pair: (usize, usize),
    /// The full 3x3 matrix.
    pub matrix: ComplexMatrix,
    /// Block as `exp(i phase)` times an SU(2) rotation.
    pub phase: f64,
    pub rotation: AxisAngle,
}

impl PairRotation {
    fn from_block(pair: (usize, usize), block: Matrix2<C64>) -> Result<Self> {
        let mut m = ComplexMatrix::identity(3).into_inner();
        let idx = [pair.0, pair.1];
        for r in 0..2 {
            for c in 0..2 {
                m[(idx[r], idx[c])] = block[(r, c)];
            }
        }
        let b = ComplexMatrix::from_row_slice(2, &[block[(0, 0)], block[(0, 1)], block[(1, 0)], block[(1, 1)]])?;
        let (phase, rotation) = su2_axis_angle(&b)?;
        Ok(Self {
            pair,
            matrix: ComplexMatrix::new(m)?,
            phase,
            rotation,
        })
    }
}

/// `target = exp(i phase) R01 R02 R12`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su3Decomposition {
    pub r01: PairRotation,
    pub r02: PairRotation,
    pub r12: PairRotation,
    pub phase: f64,
    pub report: GateReport,
}

/// Factors a 3x3 unitary into rotations on the level pairs (0,1), (0,2) and (1,2).
///
/// `R01 R02` is built to carry `e_0` onto the first column of the target, which
/// leaves `R12 = R02^dagger R01^dagger U` acting on levels 1 and 2 only. The free
/// phases of the first two factors are chosen to make the diagonal of `R12` real
/// and positive, so a target that already is a pair rotation is returned as one.
pub fn su3_decompose(target: &ComplexMatrix) -> Result<Su3Decomposition> {
    if target.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: target.dim(),
        });
    }
    let dev = target.unitarity_deviation();
    if dev > 1e-9 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let u = target.as_matrix();
    let v = [u[(0, 0)], u[(1, 0)], u[(2, 0)]];
    let a = v[0].norm().hypot(v[1].norm());
    let c = v[2];
    let (r0, r1) = if a > 1e-300 {
        (v[0] / a, v[1] / a)
    } else {
        (ONE, ZERO)
    };
    let b01 = |chi: C64| Matrix2::new(r0, -chi * r1.conj(), r1, chi * r0.conj());
    let b02 = |chi: C64| Matrix2::new(C64::new(a, 0.0), -chi * c.conj(), c, chi * a);
    let embed = |pair: (usize, usize), b: &Matrix2<C64>| {
        let mut m = nalgebra::DMatrix::<C64>::identity(3, 3);
        let idx = [pair.0, pair.1];
        for r in 0..2 {
            for col in 0..2 {
                m[(idx[r], idx[col])] = b[(r, col)];
            }
        }
        m
    };
    let remainder = |c01: C64, c02: C64| {
        embed((0, 2), &b02(c02)).adjoint() * embed((0, 1), &b01(c01)).adjoint() * u
    };
    // Row 1 of the remainder scales with conj(chi01), row 2 with conj(chi02).
    let r = remainder(ONE, ONE);
    let phase_of = |z: C64| if z.norm() > 1e-12 { z / z.norm() } else { ONE };
    let (chi01, chi02) = (phase_of(r[(1, 1)]), phase_of(r[(2, 2)]));
    let r = remainder(chi01, chi02);
    let b12 = Matrix2::new(r[(1, 1)], r[(1, 2)], r[(2, 1)], r[(2, 2)]);

    let r01 = PairRotation::from_block((0, 1), b01(chi01))?;
    let r02 = PairRotation::from_block((0, 2), b02(chi02))?;
    let r12 = PairRotation::from_block((1, 2), b12)?;
    let achieved = &r01.matrix * &r02.matrix * &r12.matrix;
    let report = GateReport::new(
        target.clone(),
        achieved,
        params([
            ("phase01", r01.phase),
            ("angle01", r01.rotation.angle),
            ("phase02", r02.phase),
            ("angle02", r02.rotation.angle),
            ("phase12", r12.phase),
            ("angle12", r12.rotation.angle),
        ]),
    )?;
    Ok(Su3Decomposition {
        r01,
        r02,
        r12,
        phase: 0.0,
        report,
    })
}
