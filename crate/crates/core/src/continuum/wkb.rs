//! Semiclassical tunneling amplitudes.

use serde::{Deserialize, Serialize};

use super::potential::{square_double_well, PiecewisePotential};
use super::solve::{solve_grid, GridSolution};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WkbFormula {
    /// Barrier action of an arbitrary piecewise potential, with the prefactor
    /// of the square barrier having the same action and forbidden width.
    General,
    /// Closed form for a square barrier between square wells.
    Square,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WkbResult {
    pub nu: f64,
    /// `int sqrt(2m(V - E)) dx` over the classically forbidden region.
    pub barrier_integral: f64,
    pub formula: WkbFormula,
    pub energy: f64,
}

/// Barrier action and forbidden width at `energy`.
///
/// The potential is piecewise constant, so the integral is a sum of exact
/// segment contributions.
pub fn barrier_action(pot: &PiecewisePotential, energy: f64, m: f64) -> (f64, f64) {
    pot.segments
        .iter()
        .filter(|s| s.v > energy)
        .fold((0.0, 0.0), |(action, width), s| {
            let w = s.x_hi - s.x_lo;
            (action + w * (2.0 * m * (s.v - energy)).sqrt(), width + w)
        })
}

/// Tunneling amplitude `nu = (2 hbar E kappa / (m V0 l)) exp(-S / hbar)`.
///
/// `S` is the barrier action, which for a square barrier is `a kappa` with
/// `kappa = sqrt(2m(V0 - E))`; `l` is the width of one well.
pub fn wkb_tunneling(pot: &PiecewisePotential, energy: f64, m: f64, hbar: f64, formula: WkbFormula) -> Result<WkbResult> {
    if !(m > 0.0 && hbar > 0.0) {
        return Err(Error::InvalidParameter("mass and hbar must be positive".into()));
    }
    if !(energy > 0.0) {
        return Err(Error::InvalidParameter(format!("energy must be positive, got {energy}")));
    }
    let top = pot.max_value();
    if energy >= top {
        return Err(Error::AboveBarrier { energy, barrier: top });
    }
    let (action, width) = barrier_action(pot, energy, m);
    let nu = match formula {
        WkbFormula::Square => {
            let g = pot
                .geometry
                .ok_or_else(|| Error::InvalidSpec("square formula needs a square-well potential".into()))?;
            if energy >= g.barrier_height {
                return Err(Error::AboveBarrier {
                    energy,
                    barrier: g.barrier_height,
                });
            }
            let kappa = (2.0 * m * (g.barrier_height - energy)).sqrt();
            2.0 * hbar * energy * kappa / (m * g.barrier_height * g.well_width) * (-g.barrier_width * kappa / hbar).exp()
        }
        WkbFormula::General => {
            let kappa = action / width;
            let v_eq = energy + kappa * kappa / (2.0 * m);
            let well = pot
                .geometry
                .map_or((pot.domain.length() - width) / 2.0, |g| g.well_width);
            if !(well > 0.0) {
                return Err(Error::InvalidSpec("no classically allowed region".into()));
            }
            2.0 * hbar * energy * kappa / (m * v_eq * well) * (-action / hbar).exp()
        }
    };
    Ok(WkbResult {
        nu,
        barrier_integral: action,
        formula,
        energy,
    })
}

/// Square double well whose barrier action at the doublet energy is `action` (in units of hbar).
#[derive(Clone, Debug)]
pub struct ActionTarget {
    pub potential: PiecewisePotential,
    pub barrier_width: f64,
    /// Mean of the two lowest grid levels.
    pub energy: f64,
    pub solution: GridSolution,
}

/// Picks the barrier width by fixed-point iteration between `a` and the doublet energy.
pub fn square_well_for_action(
    action: f64,
    v0: f64,
    l: f64,
    n_points: usize,
    m: f64,
    hbar: f64,
) -> Result<ActionTarget> {
    if !(action > 0.0) {
        return Err(Error::InvalidParameter(format!("target action must be positive, got {action}")));
    }
    let mut energy = std::f64::consts::PI.powi(2) * hbar * hbar / (2.0 * m * l * l);
    let mut last = None;
    for _ in 0..8 {
        if energy >= v0 {
            return Err(Error::AboveBarrier { energy, barrier: v0 });
        }
        let a = action * hbar / (2.0 * m * (v0 - energy)).sqrt();
        let pot = square_double_well(v0, l, a)?;
        let sol = solve_grid(&pot, n_points, 3, m, hbar)?;
        let next = 0.5 * (sol.eigenvalues[0] + sol.eigenvalues[1]);
        let done = (next - energy).abs() <= 1e-12 * energy.abs();
        energy = next;
        last = Some((pot, a, sol));
        if done {
            break;
        }
    }
    let (potential, barrier_width, solution) = last.expect("at least one iteration");
    Ok(ActionTarget {
        potential,
        barrier_width,
        energy,
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::potential::{Domain, Segment};

    #[test]
    fn square_barrier_action_is_exact() {
        let (v0, a, e, m) = (40.0, 0.3, 7.0, 1.5);
        let p = square_double_well(v0, 1.0, a).unwrap();
        let r = wkb_tunneling(&p, e, m, 1.0, WkbFormula::General).unwrap();
        assert!((r.barrier_integral - a * (2.0 * m * (v0 - e)).sqrt()).abs() < 1e-14);
        let s = wkb_tunneling(&p, e, m, 1.0, WkbFormula::Square).unwrap();
        assert!((r.nu - s.nu).abs() < 1e-14 * s.nu);
    }

    #[test]
    fn general_formula_on_stepped_barrier() {
        let edge = 1.2;
        let p = PiecewisePotential::new(
            Domain::HardWall { x_min: -edge, x_max: edge },
            vec![
                Segment { x_lo: -edge, x_hi: -0.2, v: 0.0 },
                Segment { x_lo: -0.2, x_hi: 0.0, v: 30.0 },
                Segment { x_lo: 0.0, x_hi: 0.2, v: 50.0 },
                Segment { x_lo: 0.2, x_hi: edge, v: 0.0 },
            ],
        )
        .unwrap();
        let e = 5.0;
        let r = wkb_tunneling(&p, e, 1.0, 1.0, WkbFormula::General).unwrap();
        let expected = 0.2 * (50f64).sqrt() + 0.2 * (90f64).sqrt();
        assert!((r.barrier_integral - expected).abs() < 1e-13);
        assert!(r.nu > 0.0);
        assert!(wkb_tunneling(&p, e, 1.0, 1.0, WkbFormula::Square).is_err());
        assert!(wkb_tunneling(&p, 60.0, 1.0, 1.0, WkbFormula::General).is_err());
    }

    #[test]
    fn nu_decreases_with_width_and_depth() {
        let e = 5.0;
        let mut last = f64::INFINITY;
        for k in 1..20 {
            let p = square_double_well(80.0, 1.0, 0.02 * k as f64).unwrap();
            let nu = wkb_tunneling(&p, e, 1.0, 1.0, WkbFormula::Square).unwrap().nu;
            assert!(nu > 0.0 && nu < last);
            last = nu;
        }
        // at fixed a and E, raising V0 strengthens the exponential suppression
        let mut last = f64::INFINITY;
        for k in 0..10 {
            let p = square_double_well(60.0 + 20.0 * k as f64, 1.0, 0.3).unwrap();
            let nu = wkb_tunneling(&p, e, 1.0, 1.0, WkbFormula::Square).unwrap().nu;
            assert!(nu < last);
            last = nu;
        }
    }

    #[test]
    fn action_targeting_converges() {
        let t = square_well_for_action(3.0, 250.0, 1.0, 512, 1.0, 1.0).unwrap();
        let (s, _) = barrier_action(&t.potential, t.energy, 1.0);
        assert!((s - 3.0).abs() < 1e-3, "action {s}");
    }
}
