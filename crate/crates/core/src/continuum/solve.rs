//! Central-difference discretization of `-(hbar^2 / 2m) psi'' + V psi`.

use serde::{Deserialize, Serialize};

use super::potential::{Domain, PiecewisePotential};
use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};

pub const MIN_GRID_POINTS: usize = 64;
pub const MAX_LEVELS: usize = 12;

/// Eigenpairs on a uniform grid; `sum psi_i^2 * spacing = 1` for every vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSolution {
    pub n_points: usize,
    pub spacing: f64,
    pub domain: Domain,
    pub positions: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

impl GridSolution {
    /// `sum f_i g_i * spacing`.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() * self.spacing
    }

    /// Norm of `f` carried by grid points with `x > x0`.
    pub fn weight_right_of(&self, f: &[f64], x0: f64) -> f64 {
        self.positions
            .iter()
            .zip(f)
            .filter(|(x, _)| **x > x0)
            .map(|(_, v)| v * v)
            .sum::<f64>()
            * self.spacing
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.domain.start() + self.domain.end())
    }
}

/// Grid points for `n` unknowns: interior points of a hard-wall interval,
/// or `x_i = i h` around a ring.
pub fn grid_positions(domain: &Domain, n: usize) -> (Vec<f64>, f64) {
    match *domain {
        Domain::HardWall { x_min, x_max } => {
            let h = (x_max - x_min) / (n + 1) as f64;
            ((0..n).map(|i| x_min + (i + 1) as f64 * h).collect(), h)
        }
        Domain::Periodic { length } => {
            let h = length / n as f64;
            ((0..n).map(|i| i as f64 * h).collect(), h)
        }
    }
}

fn check_physical(m: f64, hbar: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite() && hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("mass and hbar must be positive, got {m}, {hbar}")));
    }
    Ok(())
}

/// The discretized Hamiltonian, with the potential averaged over each grid cell.
pub fn grid_operator(pot: &PiecewisePotential, n: usize, m: f64, hbar: f64) -> Result<(SymTridiagonal, Vec<f64>, f64)> {
    check_physical(m, hbar)?;
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 grid points, got {n}")));
    }
    let (x, h) = grid_positions(&pot.domain, n);
    let t = hbar * hbar / (2.0 * m * h * h);
    let diag = x.iter().map(|&xi| 2.0 * t + pot.cell_average(xi, h)).collect();
    let off = vec![-t; n - 1];
    let corner = if pot.domain.is_periodic() { -t } else { 0.0 };
    Ok((SymTridiagonal::new(diag, off, corner)?, x, h))
}

/// Lowest `k` eigenpairs of the grid Hamiltonian.
///
/// Sign convention: each eigenvector has positive overlap with a ramp that
/// decreases from left to right, so even ground states are positive and odd
/// partners start positive on the left.
pub fn solve_grid(pot: &PiecewisePotential, n_points: usize, k: usize, m: f64, hbar: f64) -> Result<GridSolution> {
    if n_points < MIN_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_GRID_POINTS} grid points, got {n_points}"
        )));
    }
    if k == 0 || k > MAX_LEVELS {
        return Err(Error::InsufficientLevels {
            needed: k,
            available: MAX_LEVELS,
        });
    }
    if let (Domain::Periodic { .. }, Some(g)) = (&pot.domain, &pot.geometry) {
        if !n_points.is_multiple_of(g.wells) {
            return Err(Error::InvalidParameter(format!(
                "{n_points} grid points do not divide evenly into {} cells",
                g.wells
            )));
        }
    }
    let (op, positions, h) = grid_operator(pot, n_points, m, hbar)?;
    let (eigenvalues, vectors) = op.lowest_eigenpairs(k)?;
    let scale = 1.0 / h.sqrt();
    let eigenvectors = vectors
        .into_iter()
        .map(|mut v| {
            fix_sign(&mut v);
            v.iter_mut().for_each(|x| *x *= scale);
            v
        })
        .collect();
    Ok(GridSolution {
        n_points,
        spacing: h,
        domain: pot.domain,
        positions,
        eigenvalues,
        eigenvectors,
    })
}

pub(crate) fn fix_sign(v: &mut [f64]) {
    let n = v.len() as f64;
    let ramp: f64 = v.iter().enumerate().map(|(i, x)| (n - i as f64) * x).sum();
    let flip = if ramp.abs() > 1e-10 * n {
        ramp < 0.0
    } else {
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        v.iter().find(|x| x.abs() > 1e-6 * peak).is_some_and(|x| *x < 0.0)
    };
    if flip {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::potential::{periodic_d_well, square_box, square_double_well};
    use crate::operator::{hermitian_eig, ComplexMatrix};
    use std::f64::consts::PI;

    #[test]
    fn box_levels_converge_at_second_order() {
        let width = 1.3;
        let exact = |n: usize| (n * n) as f64 * PI * PI / (2.0 * width * width);
        let p = square_box(width).unwrap();
        let coarse = solve_grid(&p, 127, 3, 1.0, 1.0).unwrap();
        let fine = solve_grid(&p, 255, 3, 1.0, 1.0).unwrap();
        for j in 0..3 {
            let e1 = (coarse.eigenvalues[j] - exact(j + 1)).abs();
            let e2 = (fine.eigenvalues[j] - exact(j + 1)).abs();
            let rate = e1 / e2;
            assert!((rate - 4.0).abs() < 0.1, "level {j}: rate {rate}");
            // Richardson extrapolation removes the h^2 term
            let rich = (4.0 * fine.eigenvalues[j] - coarse.eigenvalues[j]) / 3.0;
            assert!((rich - exact(j + 1)).abs() < e2 * 1e-2);
        }
    }

    #[test]
    fn eigenvectors_orthonormal_on_grid() {
        let p = square_double_well(80.0, 1.0, 0.3).unwrap();
        let s = solve_grid(&p, 400, 6, 1.0, 1.0).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((s.inner(&s.eigenvectors[i], &s.eigenvectors[j]) - expected).abs() < 1e-8);
            }
        }
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn double_well_parity_alternates() {
        let p = square_double_well(60.0, 1.0, 0.25).unwrap();
        let s = solve_grid(&p, 512, 4, 1.0, 1.0).unwrap();
        let n = s.n_points;
        for (j, v) in s.eigenvectors.iter().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let dev = (0..n).map(|i| (v[i] - sign * v[n - 1 - i]).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-7, "level {j} parity deviation {dev}");
        }
        assert!(s.eigenvectors[0].iter().all(|x| *x > -1e-12));
        assert!(s.eigenvectors[1][n / 4] > 0.0);
    }

    #[test]
    fn periodic_matches_dense_reference() {
        let p = periodic_d_well(3, 20.0, 1.0, 0.3).unwrap();
        let n = 96;
        let (op, _, _) = grid_operator(&p, n, 1.0, 1.0).unwrap();
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            e[i * n + i] = op.diag[i];
            let j = (i + 1) % n;
            e[i * n + j] = op.off[0];
            e[j * n + i] = op.off[0];
        }
        let dense = hermitian_eig(&ComplexMatrix::from_real_row_slice(n, &e).unwrap(), None).unwrap();
        let s = solve_grid(&p, n, 6, 1.0, 1.0).unwrap();
        for j in 0..6 {
            assert!((s.eigenvalues[j] - dense.eigenvalues[j]).abs() < 1e-9 * dense.eigenvalues[j].abs().max(1.0));
        }
    }

    #[test]
    fn input_validation() {
        let p = square_double_well(10.0, 1.0, 0.2).unwrap();
        assert!(solve_grid(&p, 32, 2, 1.0, 1.0).is_err());
        assert!(solve_grid(&p, 128, 13, 1.0, 1.0).is_err());
        assert!(solve_grid(&p, 128, 0, 1.0, 1.0).is_err());
        assert!(solve_grid(&p, 128, 2, 0.0, 1.0).is_err());
        let ring = periodic_d_well(3, 10.0, 1.0, 0.2).unwrap();
        assert!(solve_grid(&ring, 100, 2, 1.0, 1.0).is_err());
    }
}
