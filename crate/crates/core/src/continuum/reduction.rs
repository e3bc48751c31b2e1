//! Checks that the low-lying grid spectrum behaves like a d-level system.

use serde::{Deserialize, Serialize};

use super::potential::{Domain, PiecewisePotential};
use super::solve::{fix_sign, grid_operator, solve_grid, GridSolution};
use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};
use crate::wells::golden_section;

/// Largest `(E1 - E0) / (E2 - E1)` accepted by [`effective_two_level`].
pub const MAX_TWO_LEVEL_GAP_RATIO: f64 = 0.2;
pub const DEFAULT_REDUCTION_THRESHOLD: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelReduction {
    /// `(E1 - E0) / 2`.
    pub nu_eff: f64,
    pub gap_ratio: f64,
    pub psi_l: Vec<f64>,
    pub psi_r: Vec<f64>,
    /// Fraction of the norm of `psi_r` right of the domain midpoint.
    pub right_weight: f64,
    pub overlap: f64,
}

/// Localized states `(psi_0 -+ psi_1)/sqrt(2)` and the tunneling amplitude of a double well.
pub fn effective_two_level(sol: &GridSolution) -> Result<TwoLevelReduction> {
    if sol.eigenvalues.len() < 3 {
        return Err(Error::InsufficientLevels {
            needed: 3,
            available: sol.eigenvalues.len(),
        });
    }
    let e = &sol.eigenvalues;
    let gap_ratio = (e[1] - e[0]) / (e[2] - e[1]);
    if !(gap_ratio < MAX_TWO_LEVEL_GAP_RATIO) {
        return Err(Error::RegimeViolation(format!(
            "lowest doublet is not isolated: gap ratio {gap_ratio:.4}"
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (p0, p1) = (&sol.eigenvectors[0], &sol.eigenvectors[1]);
    let minus: Vec<f64> = p0.iter().zip(p1).map(|(a, b)| s * (a - b)).collect();
    let plus: Vec<f64> = p0.iter().zip(p1).map(|(a, b)| s * (a + b)).collect();
    let c = sol.midpoint();
    let (psi_r, psi_l) = if sol.weight_right_of(&minus, c) >= sol.weight_right_of(&plus, c) {
        (minus, plus)
    } else {
        (plus, minus)
    };
    let right_weight = sol.weight_right_of(&psi_r, c) / sol.inner(&psi_r, &psi_r);
    if right_weight < 0.9 {
        return Err(Error::RegimeViolation(format!(
            "localized state holds only {right_weight:.3} of its norm in its well"
        )));
    }
    let overlap = sol.inner(&psi_l, &psi_r);
    Ok(TwoLevelReduction {
        nu_eff: 0.5 * (e[1] - e[0]),
        gap_ratio,
        psi_l,
        psi_r,
        right_weight,
        overlap,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub d: usize,
    /// `E_{d-1} - E_0`.
    pub spread: f64,
    /// `E_d - E_{d-1}`.
    pub band_gap: f64,
    pub ratio: f64,
    pub threshold: f64,
    pub pass: bool,
    /// `E_k - E_0` for the band levels.
    pub band: Vec<f64>,
}

pub fn validate_reduction(sol: &GridSolution, d: usize) -> Result<ReductionReport> {
    validate_reduction_with(sol, d, DEFAULT_REDUCTION_THRESHOLD)
}

pub fn validate_reduction_with(sol: &GridSolution, d: usize, threshold: f64) -> Result<ReductionReport> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    let e = &sol.eigenvalues;
    if e.len() < d + 1 {
        return Err(Error::InsufficientLevels {
            needed: d + 1,
            available: e.len(),
        });
    }
    let spread = e[d - 1] - e[0];
    let band_gap = e[d] - e[d - 1];
    let ratio = spread / band_gap;
    Ok(ReductionReport {
        d,
        spread,
        band_gap,
        ratio,
        threshold,
        pass: ratio < threshold,
        band: e[..d].iter().map(|x| x - e[0]).collect(),
    })
}

/// Least-squares fit of sorted band energies to `c - 2 nu cos(2 pi n / d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandFit {
    pub offset: f64,
    pub nu_eff: f64,
    pub max_residual: f64,
    pub bandwidth: f64,
    /// `max_residual / bandwidth`.
    pub relative_residual: f64,
}

pub fn cosine_band_fit(energies: &[f64]) -> Result<BandFit> {
    let d = energies.len();
    if d < 2 {
        return Err(Error::InsufficientLevels { needed: 2, available: d });
    }
    let mut e = energies.to_vec();
    e.sort_by(f64::total_cmp);
    let mut x: Vec<f64> = (0..d)
        .map(|n| -2.0 * (2.0 * std::f64::consts::PI * n as f64 / d as f64).cos())
        .collect();
    x.sort_by(f64::total_cmp);
    let mx = x.iter().sum::<f64>() / d as f64;
    let me = e.iter().sum::<f64>() / d as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxe: f64 = x.iter().zip(&e).map(|(a, b)| (a - mx) * (b - me)).sum();
    let nu = sxe / sxx;
    let offset = me - nu * mx;
    let max_residual = x
        .iter()
        .zip(&e)
        .map(|(a, b)| (b - offset - nu * a).abs())
        .fold(0.0, f64::max);
    let bandwidth = e[d - 1] - e[0];
    Ok(BandFit {
        offset,
        nu_eff: nu,
        max_residual,
        bandwidth,
        relative_residual: max_residual / bandwidth,
    })
}

/// Population transfer from the left well, on the grid and in the two-level model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub nu_eff: f64,
    /// First maximum of the right-well probability on the grid.
    pub grid_time: f64,
    /// `pi hbar / (2 nu_eff)`.
    pub two_level_time: f64,
    pub relative_error: f64,
    pub peak_probability: f64,
    /// Norm of the initial state captured by the levels used.
    pub captured_norm: f64,
}

/// Starts in the ground state of the isolated left well (wall at the midpoint)
/// and propagates it in the lowest `levels` grid eigenstates.
pub fn rabi_transfer(pot: &PiecewisePotential, n_points: usize, levels: usize, m: f64, hbar: f64) -> Result<TransferReport> {
    if !matches!(pot.domain, Domain::HardWall { .. }) {
        return Err(Error::InvalidSpec("transfer needs a hard-wall double well".into()));
    }
    let sol = solve_grid(pot, n_points, levels.max(3), m, hbar)?;
    let nu_eff = effective_two_level(&sol)?.nu_eff;
    let (op, x, h) = grid_operator(pot, n_points, m, hbar)?;
    let c = sol.midpoint();
    let nl = x.iter().filter(|xi| **xi < c).count();
    let left = SymTridiagonal::new(op.diag[..nl].to_vec(), op.off[..nl - 1].to_vec(), 0.0)?;
    let (_, vecs) = left.lowest_eigenpairs(1)?;
    let mut phi = vecs.into_iter().next().expect("one vector");
    fix_sign(&mut phi);
    let mut init = vec![0.0; n_points];
    for (i, v) in phi.iter().enumerate() {
        init[i] = v / h.sqrt();
    }
    let coeffs: Vec<f64> = sol.eigenvectors.iter().map(|v| sol.inner(v, &init)).collect();
    let captured_norm: f64 = coeffs.iter().map(|c| c * c).sum();
    let k = coeffs.len();
    // right-half overlaps of eigenvector pairs
    let mut o = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let v: f64 = x
                .iter()
                .enumerate()
                .filter(|(_, xi)| **xi > c)
                .map(|(p, _)| sol.eigenvectors[i][p] * sol.eigenvectors[j][p])
                .sum::<f64>()
                * h;
            o[i * k + j] = v;
            o[j * k + i] = v;
        }
    }
    let e = &sol.eigenvalues;
    let p_right = |t: f64| {
        let mut acc = 0.0;
        for i in 0..k {
            for j in 0..k {
                acc += coeffs[i] * coeffs[j] * o[i * k + j] * ((e[i] - e[j]) * t / hbar).cos();
            }
        }
        acc
    };
    let two_level_time = std::f64::consts::PI * hbar / (2.0 * nu_eff);
    let samples = 4000;
    let dt = 1.5 * two_level_time / samples as f64;
    let (best, _) = (0..=samples)
        .map(|s| (s, p_right(s as f64 * dt)))
        .fold((0, f64::NEG_INFINITY), |acc, (s, p)| if p > acc.1 { (s, p) } else { acc });
    let t0 = best as f64 * dt;
    let grid_time = golden_section(&|t| -p_right(t), (t0 - dt).max(0.0), t0 + dt, 1e-12);
    Ok(TransferReport {
        nu_eff,
        grid_time,
        two_level_time,
        relative_error: (grid_time / two_level_time - 1.0).abs(),
        peak_probability: p_right(grid_time),
        captured_norm,
    })
}

/// Tunneling amplitude of a tilted double well built from its two halves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymmetricReport {
    pub nu: f64,
    pub nu_l: f64,
    pub nu_r: f64,
    pub eps_l: f64,
    pub eps_r: f64,
    /// `eps_l - eps_r`.
    pub delta_eps: f64,
    pub prefactor: f64,
    pub one_well_gap: f64,
    pub barrier_center: f64,
}

impl AsymmetricReport {
    /// `2 sqrt((delta_eps/2)^2 + nu^2)`.
    pub fn model_gap(&self) -> f64 {
        2.0 * (self.delta_eps / 2.0).hypot(self.nu)
    }

    /// `atan(nu / (delta_eps/2))`.
    pub fn mixing_angle(&self) -> f64 {
        self.nu.atan2(self.delta_eps / 2.0)
    }
}

fn points_for(length: f64, h: f64) -> usize {
    ((length / h).round() as usize).saturating_sub(1).max(super::solve::MIN_GRID_POINTS)
}

/// Symmetric reflections of each half give `nu_L`, `nu_R`; the isolated
/// halves (wall at the barrier centre) give `eps_L`, `eps_R`; the result is
/// `A sqrt(nu_L nu_R)` with
/// `A = ([(Vc - eps_L)/(Vc - eps_R)]^(1/4) + [(Vc - eps_R)/(Vc - eps_L)]^(1/4)) / 2`.
///
/// All sub-problems use the grid spacing of an `n_points` grid on the full well.
pub fn asymmetric_nu(pot: &PiecewisePotential, n_points: usize, m: f64, hbar: f64) -> Result<AsymmetricReport> {
    let Domain::HardWall { x_min, x_max } = pot.domain else {
        return Err(Error::InvalidSpec("asymmetric reduction needs a hard-wall double well".into()));
    };
    let b = pot.central_barrier()?;
    let barrier = pot.segments[b];
    let c = 0.5 * (barrier.x_lo + barrier.x_hi);
    let h = (x_max - x_min) / (n_points + 1) as f64;

    let nu_of = |keep_left: bool| -> Result<f64> {
        let p = pot.reflect(c, keep_left)?;
        let n = points_for(p.domain.length(), h);
        Ok(effective_two_level(&solve_grid(&p, n, 3, m, hbar)?)?.nu_eff)
    };
    let levels_of = |lo: f64, hi: f64| -> Result<(f64, f64)> {
        let p = pot.restrict(lo, hi)?;
        let s = solve_grid(&p, points_for(hi - lo, h), 2, m, hbar)?;
        Ok((s.eigenvalues[0], s.eigenvalues[1] - s.eigenvalues[0]))
    };
    let nu_l = nu_of(true)?;
    let nu_r = nu_of(false)?;
    let (eps_l, gap_l) = levels_of(x_min, c)?;
    let (eps_r, gap_r) = levels_of(c, x_max)?;
    let delta_eps = eps_l - eps_r;
    let one_well_gap = gap_l.min(gap_r);
    if delta_eps.abs() >= one_well_gap {
        return Err(Error::RegimeViolation(format!(
            "well asymmetry {delta_eps:.4} reaches the one-well gap {one_well_gap:.4}"
        )));
    }
    let vc = barrier.v;
    if eps_l >= vc || eps_r >= vc {
        return Err(Error::AboveBarrier {
            energy: eps_l.max(eps_r),
            barrier: vc,
        });
    }
    let q = ((vc - eps_l) / (vc - eps_r)).powf(0.25);
    let prefactor = 0.5 * (q + 1.0 / q);
    Ok(AsymmetricReport {
        nu: prefactor * (nu_l * nu_r).sqrt(),
        nu_l,
        nu_r,
        eps_l,
        eps_r,
        delta_eps,
        prefactor,
        one_well_gap,
        barrier_center: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::potential::{periodic_d_well, square_double_well, tilted_double_well};

    #[test]
    fn deep_double_well_reduction() {
        let p = square_double_well(250.0, 1.0, 0.18).unwrap();
        let s = solve_grid(&p, 1024, 3, 1.0, 1.0).unwrap();
        let r = effective_two_level(&s).unwrap();
        assert!(r.right_weight >= 0.99);
        assert!(r.overlap.abs() < 0.05);
        let c = s.midpoint();
        assert!(s.weight_right_of(&r.psi_l, c) < 0.01);
        let v = validate_reduction(&s, 2).unwrap();
        assert!(v.pass && v.ratio < 0.05);
    }

    #[test]
    fn shallow_barrier_fails_reduction() {
        let p = square_double_well(0.5, 1.0, 0.1).unwrap();
        let s = solve_grid(&p, 256, 3, 1.0, 1.0).unwrap();
        assert!(effective_two_level(&s).is_err());
        let v = validate_reduction(&s, 2).unwrap();
        assert!(!v.pass && v.ratio > 0.2);
        assert!(validate_reduction(&s, 3).is_err());
    }

    #[test]
    fn gap_ratio_falls_with_barrier_width() {
        let mut last = f64::INFINITY;
        for k in 1..6 {
            let p = square_double_well(100.0, 1.0, 0.05 * k as f64).unwrap();
            let s = solve_grid(&p, 512, 3, 1.0, 1.0).unwrap();
            let r = validate_reduction(&s, 2).unwrap().ratio;
            assert!(r < last);
            last = r;
        }
    }

    #[test]
    fn band_fit_exact_cosine() {
        let d = 6;
        let e: Vec<f64> = (0..d)
            .map(|n| 3.0 - 2.0 * 0.1 * (2.0 * std::f64::consts::PI * n as f64 / d as f64).cos())
            .collect();
        let f = cosine_band_fit(&e).unwrap();
        assert!((f.nu_eff - 0.1).abs() < 1e-14 && (f.offset - 3.0).abs() < 1e-14);
        assert!(f.relative_residual < 1e-12);
    }

    #[test]
    fn periodic_triple_band_structure() {
        let p = periodic_d_well(3, 250.0, 1.0, 0.18).unwrap();
        let s = solve_grid(&p, 3 * 128, 4, 1.0, 1.0).unwrap();
        let v = validate_reduction(&s, 3).unwrap();
        assert!(v.pass);
        assert!((v.band[2] - v.band[1]).abs() < 1e-6 * v.band[1]);
    }

    #[test]
    fn symmetric_input_gives_unit_prefactor() {
        let p = square_double_well(250.0, 1.0, 0.18).unwrap();
        let r = asymmetric_nu(&p, 512, 1.0, 1.0).unwrap();
        assert!((r.prefactor - 1.0).abs() < 1e-12);
        assert!((r.nu_l - r.nu_r).abs() < 1e-9 * r.nu_l);
        assert!((r.nu - r.nu_l).abs() < 1e-9 * r.nu_l);
        assert!(r.delta_eps.abs() < 1e-9);
    }

    #[test]
    fn large_tilt_is_a_regime_violation() {
        let p = tilted_double_well(250.0, 1.0, 0.18, 20.0).unwrap();
        assert!(matches!(asymmetric_nu(&p, 512, 1.0, 1.0), Err(Error::RegimeViolation(_))));
    }

    #[test]
    fn transfer_time_matches_two_level_model() {
        let p = square_double_well(250.0, 1.0, 0.1354).unwrap();
        let r = rabi_transfer(&p, 1024, 12, 1.0, 1.0).unwrap();
        assert!(r.captured_norm > 0.999);
        assert!(r.relative_error < 0.05, "{r:?}");
    }
}
