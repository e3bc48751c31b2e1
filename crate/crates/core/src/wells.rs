//! Hamiltonians of coupled-well systems in the localized-state basis.
//!
//! Basis vector `k` is the state localized in well `k`. Energies are in units
//! of the tunneling amplitude unless stated otherwise; nothing here assumes
//! a particular value of hbar.

use std::f64::consts::PI;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{gell_mann, pauli, ComplexMatrix, C64, I};

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Planck constant, J s.
pub const H_PLANCK: f64 = 6.626_070_15e-34;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Topology {
    SymmetricDouble,
    AsymmetricDouble,
    PeriodicTriple,
    FullyConnected,
    CyclicChain,
    Custom,
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Ok(match key.as_str() {
            "symmetricdouble" | "double" | "symmetric" => Topology::SymmetricDouble,
            "asymmetricdouble" | "asymmetric" | "tilted" => Topology::AsymmetricDouble,
            "periodictriple" | "triple" => Topology::PeriodicTriple,
            "fullyconnected" | "full" => Topology::FullyConnected,
            "cyclicchain" | "cyclic" | "ring" => Topology::CyclicChain,
            "custom" => Topology::Custom,
            _ => return Err(Error::InvalidSpec(format!("unknown topology '{s}'"))),
        })
    }
}

fn default_nu() -> f64 {
    1.0
}

/// Declarative description of a well system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub topology: Topology,
    /// Tunneling amplitude; must be positive.
    #[serde(default = "default_nu")]
    pub nu: f64,
    /// `eps_L - eps_R`, used only by the asymmetric double well.
    #[serde(default)]
    pub delta_eps: f64,
    /// Number of wells for the fully connected and cyclic topologies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_matrix: Option<ComplexMatrix>,
}

impl HamiltonianSpec {
    fn base(topology: Topology, nu: f64) -> Self {
        Self {
            topology,
            nu,
            delta_eps: 0.0,
            d: None,
            custom_matrix: None,
        }
    }

    pub fn symmetric_double(nu: f64) -> Self {
        Self::base(Topology::SymmetricDouble, nu)
    }

    pub fn asymmetric_double(nu: f64, delta_eps: f64) -> Self {
        Self {
            delta_eps,
            ..Self::base(Topology::AsymmetricDouble, nu)
        }
    }

    pub fn periodic_triple(nu: f64) -> Self {
        Self::base(Topology::PeriodicTriple, nu)
    }

    pub fn fully_connected(d: usize, nu: f64) -> Self {
        Self {
            d: Some(d),
            ..Self::base(Topology::FullyConnected, nu)
        }
    }

    pub fn cyclic_chain(d: usize, nu: f64) -> Self {
        Self {
            d: Some(d),
            ..Self::base(Topology::CyclicChain, nu)
        }
    }

    pub fn custom(matrix: ComplexMatrix) -> Self {
        Self {
            custom_matrix: Some(matrix),
            ..Self::base(Topology::Custom, 1.0)
        }
    }

    /// Hilbert-space dimension, after validation.
    pub fn dim(&self) -> Result<usize> {
        self.validate()?;
        Ok(match self.topology {
            Topology::SymmetricDouble | Topology::AsymmetricDouble => 2,
            Topology::PeriodicTriple => 3,
            Topology::FullyConnected | Topology::CyclicChain => self.d.unwrap_or(0),
            Topology::Custom => self.custom_matrix.as_ref().map_or(0, |m| m.dim()),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fixed = |d: usize| -> Result<()> {
            match self.d {
                Some(n) if n != d => Err(Error::InvalidSpec(format!(
                    "{:?} has {d} wells, got d = {n}",
                    self.topology
                ))),
                _ => Ok(()),
            }
        };
        if self.topology != Topology::Custom && !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidSpec(format!("nu must be positive, got {}", self.nu)));
        }
        if !self.delta_eps.is_finite() {
            return Err(Error::InvalidSpec("delta_eps must be finite".into()));
        }
        match self.topology {
            Topology::SymmetricDouble | Topology::AsymmetricDouble => fixed(2),
            Topology::PeriodicTriple => fixed(3),
            Topology::FullyConnected | Topology::CyclicChain => match self.d {
                Some(d) if d >= 2 => Ok(()),
                Some(d) => Err(Error::InvalidSpec(format!("need d >= 2, got {d}"))),
                None => Err(Error::InvalidSpec(format!(
                    "{:?} requires the number of wells d",
                    self.topology
                ))),
            },
            Topology::Custom => match &self.custom_matrix {
                Some(m) if m.is_hermitian(1e-10 * m.max_abs().max(1.0)) => Ok(()),
                Some(m) => Err(Error::NotHermitian {
                    deviation: m.hermiticity_deviation(),
                }),
                None => Err(Error::InvalidSpec("custom topology requires custom_matrix".into())),
            },
        }
    }
}

/// Builds the Hamiltonian matrix described by `spec`.
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let nu = spec.nu;
    Ok(match spec.topology {
        Topology::SymmetricDouble => pauli(1)?.scale_real(-nu),
        Topology::AsymmetricDouble => {
            pauli(3)?.scale_real(spec.delta_eps / 2.0) - pauli(1)?.scale_real(nu)
        }
        Topology::PeriodicTriple => (gell_mann(1)? + gell_mann(4)? + gell_mann(6)?).scale_real(-nu),
        Topology::FullyConnected => {
            let d = spec.d.unwrap_or(0);
            let mut entries = vec![-nu; d * d];
            for i in 0..d {
                entries[i * d + i] = 0.0;
            }
            ComplexMatrix::from_real_row_slice(d, &entries)?
        }
        Topology::CyclicChain => {
            // Each well couples forward and backward. On a two-well ring both
            // bonds join the same pair, so the coupling doubles to -2 nu.
            let d = spec.d.unwrap_or(0);
            let mut entries = vec![0.0; d * d];
            for i in 0..d {
                let j = (i + 1) % d;
                entries[i * d + j] -= nu;
                entries[j * d + i] -= nu;
            }
            ComplexMatrix::from_real_row_slice(d, &entries)?
        }
        Topology::Custom => spec
            .custom_matrix
            .clone()
            .ok_or_else(|| Error::InvalidSpec("missing custom matrix".into()))?,
    })
}

/// Closed-form eigenvalues, ascending.
pub fn analytic_spectrum(spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let nu = spec.nu;
    let mut e = match spec.topology {
        Topology::SymmetricDouble => vec![-nu, nu],
        Topology::AsymmetricDouble => {
            let r = (spec.delta_eps / 2.0).hypot(nu);
            vec![-r, r]
        }
        Topology::PeriodicTriple => vec![-2.0 * nu, nu, nu],
        Topology::FullyConnected => {
            let d = spec.d.unwrap_or(0);
            let mut e = vec![nu; d];
            e[0] = -nu * (d as f64 - 1.0);
            e
        }
        Topology::CyclicChain => {
            let d = spec.d.unwrap_or(0);
            (0..d).map(|n| cyclic_band_energy(nu, n, d)).collect()
        }
        Topology::Custom => {
            return Err(Error::InvalidSpec("no closed-form spectrum for a custom matrix".into()))
        }
    };
    e.sort_by(f64::total_cmp);
    Ok(e)
}

/// Tight-binding band energy `-2 nu cos(2 pi n / d)`.
pub fn cyclic_band_energy(nu: f64, n: usize, d: usize) -> f64 {
    -2.0 * nu * (2.0 * PI * n as f64 / d as f64).cos()
}

/// Cyclic current operator on a ring of `d >= 3` wells.
///
/// Hermitian, with `-i` on the superdiagonal, `+i` on the subdiagonal and the
/// wrap-around corners `+i` at `(0, d-1)` and `-i` at `(d-1, 0)`.
pub fn cyclic_current(d: usize) -> Result<ComplexMatrix> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!("cyclic current needs d >= 3, got {d}")));
    }
    let mut m = ComplexMatrix::zeros(d).into_inner();
    for i in 0..d {
        let j = (i + 1) % d;
        m[(i, j)] = -I;
        m[(j, i)] = I;
    }
    ComplexMatrix::new(m)
}

/// Eigenvalue of [`cyclic_current`] on modular-momentum state `n`: `2 sin(2 pi n / d)`.
pub fn cyclic_current_eigenvalue(n: usize, d: usize) -> f64 {
    2.0 * (2.0 * PI * n as f64 / d as f64).sin()
}

/// The four traceless qutrit generators commuting with the periodic triple well.
///
/// `M1..M3` are transposition matrices minus `I/3`; `M4` is the cyclic current.
/// In the Gell-Mann basis `M1 = lambda_1 - lambda_8/sqrt(3)`,
/// `M2 = lambda_4 - lambda_3/2 + lambda_8/(2 sqrt 3)` and
/// `M3 = lambda_6 + lambda_3/2 + lambda_8/(2 sqrt 3)`.
pub fn commuting_basis_su3() -> [ComplexMatrix; 4] {
    let third = 1.0 / 3.0;
    let [m1, m2, m3] = shifted_generators();
    let shift = ComplexMatrix::identity(3).scale_real(third);
    [
        m1 - &shift,
        m2 - &shift,
        m3 - &shift,
        cyclic_current(3).expect("d = 3"),
    ]
}

/// `M'_i = M_i + I/3`: the transpositions of wells (0,1), (0,2) and (1,2).
pub fn shifted_generators() -> [ComplexMatrix; 3] {
    let perm = |p: [usize; 3]| ComplexMatrix::permutation(&p).expect("valid permutation");
    [perm([1, 0, 2]), perm([2, 1, 0]), perm([0, 2, 1])]
}

/// Named perturbation generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PerturbationKind {
    CyclicCurrent,
    M1,
    M2,
    M3,
    M4,
    Mp1,
    Mp2,
    Mp3,
    /// Cyclic on-site energy differences `eps_k - eps_{k+1 mod d}`; they must sum to zero.
    DiagonalTilt(Vec<f64>),
    /// Coefficients of `lambda_1..lambda_8`.
    GellMannCombination([f64; 8]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub kind: PerturbationKind,
    #[serde(default = "default_nu")]
    pub epsilon: f64,
}

impl PerturbationSpec {
    pub fn new(kind: PerturbationKind, epsilon: f64) -> Self {
        Self { kind, epsilon }
    }

    /// Unscaled generator acting on a `dim`-level system.
    pub fn generator(&self, dim: usize) -> Result<ComplexMatrix> {
        let qutrit_only = |m: ComplexMatrix| -> Result<ComplexMatrix> {
            if dim != 3 {
                return Err(Error::InvalidSpec(format!(
                    "{:?} is a qutrit generator, system has dimension {dim}",
                    self.kind
                )));
            }
            Ok(m)
        };
        match &self.kind {
            PerturbationKind::CyclicCurrent => cyclic_current(dim),
            PerturbationKind::M1 => qutrit_only(commuting_basis_su3()[0].clone()),
            PerturbationKind::M2 => qutrit_only(commuting_basis_su3()[1].clone()),
            PerturbationKind::M3 => qutrit_only(commuting_basis_su3()[2].clone()),
            PerturbationKind::M4 => qutrit_only(commuting_basis_su3()[3].clone()),
            PerturbationKind::Mp1 => qutrit_only(shifted_generators()[0].clone()),
            PerturbationKind::Mp2 => qutrit_only(shifted_generators()[1].clone()),
            PerturbationKind::Mp3 => qutrit_only(shifted_generators()[2].clone()),
            PerturbationKind::DiagonalTilt(diffs) => diagonal_tilt(diffs, dim),
            PerturbationKind::GellMannCombination(coeffs) => {
                let mut m = qutrit_only(ComplexMatrix::zeros(3))?;
                for (a, &c) in coeffs.iter().enumerate() {
                    m = m + gell_mann(a + 1)?.scale_real(c);
                }
                Ok(m)
            }
        }
    }

    /// `epsilon * generator(dim)`.
    pub fn matrix(&self, dim: usize) -> Result<ComplexMatrix> {
        if !self.epsilon.is_finite() {
            return Err(Error::InvalidSpec("epsilon must be finite".into()));
        }
        Ok(self.generator(dim)?.scale_real(self.epsilon))
    }
}

fn diagonal_tilt(diffs: &[f64], dim: usize) -> Result<ComplexMatrix> {
    if diffs.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: diffs.len(),
        });
    }
    let scale = diffs.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let sum: f64 = diffs.iter().sum();
    if sum.abs() > 1e-12 * scale {
        return Err(Error::InvalidSpec(format!(
            "cyclic energy differences must sum to zero, got {sum}"
        )));
    }
    let mut eps = vec![0.0; dim];
    for k in 1..dim {
        eps[k] = eps[k - 1] - diffs[k - 1];
    }
    let mean = eps.iter().sum::<f64>() / dim as f64;
    eps.iter_mut().for_each(|e| *e -= mean);
    Ok(ComplexMatrix::diagonal(&eps))
}

/// Angle of the effective field from the z axis, `atan(nu / (delta_eps/2))`, in `(0, pi)`.
pub fn mixing_angle(nu: f64, delta_eps: f64) -> Result<f64> {
    if !(nu > 0.0 && nu.is_finite()) || !delta_eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mixing angle needs nu > 0, got nu = {nu}, delta_eps = {delta_eps}"
        )));
    }
    Ok(nu.atan2(delta_eps / 2.0))
}

/// Eigenstate of the modular momentum on a ring of `d` wells.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularMomentumState {
    pub n: usize,
    /// `2 pi n hbar / L`.
    pub momentum: f64,
    /// Components `exp(2 pi i n k / d) / sqrt(d)`.
    pub vector: DVector<C64>,
}

pub fn modular_momentum_states(d: usize, length: f64, hbar: f64) -> Result<Vec<ModularMomentumState>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    if !(length > 0.0) || !(hbar > 0.0) {
        return Err(Error::InvalidParameter("length and hbar must be positive".into()));
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok((0..d)
        .map(|n| ModularMomentumState {
            n,
            momentum: 2.0 * PI * n as f64 * hbar / length,
            vector: DVector::from_fn(d, |k, _| {
                C64::from_polar(norm, 2.0 * PI * (n * k) as f64 / d as f64)
            }),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThermalReport {
    /// `k_B T / Delta E_01`.
    pub ratio: f64,
    pub threshold: f64,
    pub pass: bool,
    /// `k_B T / ((eps_s1 - eps_s0)/2)`, when the one-well gap is known.
    pub min_tilt_angle: Option<f64>,
}

pub const DEFAULT_THERMAL_THRESHOLD: f64 = 0.1;

/// Thermal robustness of a qubit gap `delta_e01` (joules) at `temperature` (kelvin).
pub fn thermal_check(delta_e01: f64, temperature: f64, one_well_gap: Option<f64>) -> Result<ThermalReport> {
    thermal_check_with(delta_e01, temperature, one_well_gap, DEFAULT_THERMAL_THRESHOLD)
}

pub fn thermal_check_with(
    delta_e01: f64,
    temperature: f64,
    one_well_gap: Option<f64>,
    threshold: f64,
) -> Result<ThermalReport> {
    if !(delta_e01 > 0.0) || !(temperature > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gap and temperature must be positive, got {delta_e01} J and {temperature} K"
        )));
    }
    if let Some(g) = one_well_gap {
        if !(g > 0.0) {
            return Err(Error::InvalidParameter(format!("one-well gap must be positive, got {g}")));
        }
    }
    let thermal = K_B * temperature;
    let ratio = thermal / delta_e01;
    Ok(ThermalReport {
        ratio,
        threshold,
        pass: ratio < threshold,
        min_tilt_angle: one_well_gap.map(|g| thermal / (g / 2.0)),
    })
}

/// Frequency `k_B T / h` in Hz.
pub fn thermal_frequency(temperature: f64) -> f64 {
    K_B * temperature / H_PLANCK
}

/// Potential part of the rf-SQUID Hamiltonian,
/// `(phi_b^2 / L) [ (phi - phi_x)^2 / 2 - beta cos(phi) ]`.
pub fn squid_potential(phi: f64, phi_x: f64, beta: f64, l_ind: f64, phi_b: f64) -> Result<f64> {
    if !(l_ind > 0.0) {
        return Err(Error::InvalidParameter(format!("inductance must be positive, got {l_ind}")));
    }
    Ok(squid_potential_unchecked(phi, phi_x, beta, l_ind, phi_b))
}

fn squid_potential_unchecked(phi: f64, phi_x: f64, beta: f64, l_ind: f64, phi_b: f64) -> f64 {
    phi_b * phi_b / l_ind * (0.5 * (phi - phi_x).powi(2) - beta * phi.cos())
}

/// Stationary points of the SQUID potential relevant to the qubit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquidLandscape {
    pub single_well: bool,
    /// All local minima `(phi, V)` found in the scan window, ordered by `phi`.
    pub minima: Vec<(f64, f64)>,
    pub left_minimum: Option<(f64, f64)>,
    pub right_minimum: Option<(f64, f64)>,
    pub barrier_top: Option<(f64, f64)>,
    /// Barrier top measured from the shallower of the two minima.
    pub barrier_height: Option<f64>,
    /// `V(left minimum) - V(right minimum)`.
    pub delta_eps: Option<f64>,
}

const SQUID_SCAN_POINTS: usize = 2048;

/// Locates the double-well structure of [`squid_potential`] on `[phi_x - 2pi, phi_x + 2pi]`.
///
/// A bracketing scan finds candidate extrema which golden-section search then
/// refines. The two deepest minima define the qubit wells.
pub fn squid_landscape(phi_x: f64, beta: f64, l_ind: f64, phi_b: f64) -> Result<SquidLandscape> {
    if !(l_ind > 0.0) {
        return Err(Error::InvalidParameter(format!("inductance must be positive, got {l_ind}")));
    }
    let v = |phi: f64| squid_potential_unchecked(phi, phi_x, beta, l_ind, phi_b);
    // Newton polish on V'(phi) = 0 inside the bracket; golden section alone
    // only locates the point to about sqrt(machine epsilon).
    let polish = |mut p: f64, a: f64, b: f64| {
        for _ in 0..50 {
            let d1 = (p - phi_x) + beta * p.sin();
            let d2 = 1.0 + beta * p.cos();
            if d2 == 0.0 {
                break;
            }
            let next = p - d1 / d2;
            if !(next > a && next < b) {
                break;
            }
            let done = (next - p).abs() <= 1e-15 * (1.0 + p.abs());
            p = next;
            if done {
                break;
            }
        }
        p
    };
    let lo = phi_x - 2.0 * PI;
    let step = 4.0 * PI / (SQUID_SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SQUID_SCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&p| v(p)).collect();

    let mut minima = Vec::new();
    for i in 1..SQUID_SCAN_POINTS - 1 {
        if vals[i] < vals[i - 1] && vals[i] <= vals[i + 1] {
            let p = golden_section(&v, grid[i - 1], grid[i + 1], 1e-12);
            let p = polish(p, grid[i - 1], grid[i + 1]);
            minima.push((p, v(p)));
        }
    }
    let single = SquidLandscape {
        single_well: true,
        minima: minima.clone(),
        left_minimum: None,
        right_minimum: None,
        barrier_top: None,
        barrier_height: None,
        delta_eps: None,
    };
    if minima.len() < 2 {
        return Ok(single);
    }
    let mut deepest = minima.clone();
    deepest.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (mut left, mut right) = (deepest[0], deepest[1]);
    if left.0 > right.0 {
        std::mem::swap(&mut left, &mut right);
    }
    // Highest scan point between the two wells, refined as a maximum.
    let (imax, _) = grid
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > left.0 && p < right.0)
        .map(|(i, _)| (i, vals[i]))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Numerical("no scan point between SQUID minima".into()))?;
    let a = grid[imax.saturating_sub(1)].max(left.0);
    let b = grid[(imax + 1).min(SQUID_SCAN_POINTS - 1)].min(right.0);
    let top_phi = polish(golden_section(&|p| -v(p), a, b, 1e-12), a, b);
    let top = (top_phi, v(top_phi));
    Ok(SquidLandscape {
        single_well: false,
        minima,
        left_minimum: Some(left),
        right_minimum: Some(right),
        barrier_top: Some(top),
        barrier_height: Some(top.1 - left.1.max(right.1)),
        delta_eps: Some(left.1 - right.1),
    })
}

/// Minimizer of a unimodal function on `[a, b]`.
pub(crate) fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Cyclic shift `e_k -> e_{k+1 mod d}`.
pub fn cyclic_shift(d: usize) -> Result<ComplexMatrix> {
    let perm: Vec<usize> = (0..d).map(|k| (k + 1) % d).collect();
    ComplexMatrix::permutation(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{spectrum, ONE};

    fn approx_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn triple_well_matrix() {
        let h = build_hamiltonian(&HamiltonianSpec::periodic_triple(1.0)).unwrap();
        let expected = ComplexMatrix::from_real_row_slice(3, &[0., -1., -1., -1., 0., -1., -1., -1., 0.]).unwrap();
        assert!(h.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn asymmetric_reduces_to_symmetric() {
        let a = build_hamiltonian(&HamiltonianSpec::asymmetric_double(0.4, 0.0)).unwrap();
        let s = build_hamiltonian(&HamiltonianSpec::symmetric_double(0.4)).unwrap();
        assert!(a.max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn cyclic_four_first_row() {
        let h = build_hamiltonian(&HamiltonianSpec::cyclic_chain(4, 1.0)).unwrap();
        let row: Vec<f64> = (0..4).map(|j| h.get(0, j).re).collect();
        assert_eq!(row, vec![0.0, -1.0, 0.0, -1.0]);
        // circulant: every row is the first shifted
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h.get(i, j), h.get(0, (j + 4 - i) % 4));
            }
        }
    }

    #[test]
    fn cyclic_small_rings_match_named_topologies() {
        // two bonds between the same pair of wells
        let c2 = build_hamiltonian(&HamiltonianSpec::cyclic_chain(2, 0.3)).unwrap();
        let s2 = build_hamiltonian(&HamiltonianSpec::symmetric_double(0.6)).unwrap();
        assert!(c2.max_abs_diff(&s2) < 1e-15);
        let c3 = build_hamiltonian(&HamiltonianSpec::cyclic_chain(3, 0.3)).unwrap();
        let t3 = build_hamiltonian(&HamiltonianSpec::periodic_triple(0.3)).unwrap();
        assert!(c3.max_abs_diff(&t3) < 1e-15);
    }

    #[test]
    fn analytic_values() {
        let asym = analytic_spectrum(&HamiltonianSpec::asymmetric_double(1.0, 2.0)).unwrap();
        assert!((asym[1] - asym[0] - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        let fc = analytic_spectrum(&HamiltonianSpec::fully_connected(5, 1.0)).unwrap();
        assert_eq!(fc, vec![-4.0, 1.0, 1.0, 1.0, 1.0]);
        let c4 = analytic_spectrum(&HamiltonianSpec::cyclic_chain(4, 1.0)).unwrap();
        assert!(approx_eq(&c4, &[-2.0, 0.0, 0.0, 2.0], 1e-15));
        assert!(analytic_spectrum(&HamiltonianSpec::custom(ComplexMatrix::identity(2))).is_err());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(build_hamiltonian(&HamiltonianSpec::symmetric_double(0.0)).is_err());
        assert!(build_hamiltonian(&HamiltonianSpec::cyclic_chain(1, 1.0)).is_err());
        let mut spec = HamiltonianSpec::cyclic_chain(4, 1.0);
        spec.d = None;
        assert!(build_hamiltonian(&spec).is_err());
        let mut spec = HamiltonianSpec::periodic_triple(1.0);
        spec.d = Some(4);
        assert!(build_hamiltonian(&spec).is_err());
        let nonherm = ComplexMatrix::from_real_row_slice(2, &[0., 1., 0., 0.]).unwrap();
        assert!(build_hamiltonian(&HamiltonianSpec::custom(nonherm)).is_err());
    }

    #[test]
    fn symmetric_double_commutes_with_swap() {
        let h = build_hamiltonian(&HamiltonianSpec::symmetric_double(1.0)).unwrap();
        let p = ComplexMatrix::permutation(&[1, 0]).unwrap();
        assert!(h.commutator(&p).max_abs() < 1e-15);
    }

    #[test]
    fn cyclic_hamiltonians_invariant_under_shift() {
        for d in 3..=9 {
            let h = build_hamiltonian(&HamiltonianSpec::cyclic_chain(d, 0.7)).unwrap();
            let s = cyclic_shift(d).unwrap();
            assert!((s.adjoint() * &h * &s).max_abs_diff(&h) < 1e-15);
        }
    }

    #[test]
    fn cyclic_current_triple() {
        let j = cyclic_current(3).unwrap();
        let c = |re: f64, im: f64| C64::new(re, im);
        let expected = ComplexMatrix::from_row_slice(
            3,
            &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 1.), c(0., 0.), c(0., -1.), c(0., -1.), c(0., 1.), c(0., 0.)],
        )
        .unwrap();
        assert_eq!(j, expected);
        let combo = gell_mann(2).unwrap() + gell_mann(7).unwrap() - gell_mann(5).unwrap();
        assert!(j.max_abs_diff(&combo) < 1e-15);
        let s = spectrum(&j).unwrap();
        let r3 = 3f64.sqrt();
        assert!(approx_eq(&s.eigenvalues, &[-r3, 0.0, r3], 1e-14));
        assert!(cyclic_current(2).is_err());
    }

    #[test]
    fn cyclic_current_commutes_only_on_rings() {
        for d in 3..=12 {
            let h = build_hamiltonian(&HamiltonianSpec::cyclic_chain(d, 1.0)).unwrap();
            let j = cyclic_current(d).unwrap();
            assert!(h.commutator(&j).max_abs() < 1e-13, "d = {d}");
        }
        // On the double well the current is sigma_y, which does not commute with -nu sigma_x.
        let h2 = build_hamiltonian(&HamiltonianSpec::symmetric_double(1.0)).unwrap();
        assert!(h2.commutator(&pauli(2).unwrap()).max_abs() > 1.0);
    }

    #[test]
    fn commuting_basis_matches_listed_matrices() {
        let [m1, m2, m3, m4] = commuting_basis_su3();
        let t = 1.0 / 3.0;
        let m1_listed = ComplexMatrix::from_real_row_slice(3, &[-t, 1., 0., 1., -t, 0., 0., 0., 2. * t]).unwrap();
        let m2_listed = ComplexMatrix::from_real_row_slice(3, &[-t, 0., 1., 0., 2. * t, 0., 1., 0., -t]).unwrap();
        let m3_listed = ComplexMatrix::from_real_row_slice(3, &[2. * t, 0., 0., 0., -t, 1., 0., 1., -t]).unwrap();
        assert!(m1.max_abs_diff(&m1_listed) < 1e-15);
        assert!(m2.max_abs_diff(&m2_listed) < 1e-15);
        assert!(m3.max_abs_diff(&m3_listed) < 1e-15);
        assert_eq!(m4, cyclic_current(3).unwrap());
        let h = build_hamiltonian(&HamiltonianSpec::periodic_triple(1.0)).unwrap();
        for m in [&m1, &m2, &m3, &m4] {
            assert!(h.commutator(m).max_abs() < 1e-14);
            assert!(m.trace().norm() < 1e-15);
        }
    }

    #[test]
    fn commuting_basis_gell_mann_expansions() {
        let [m1, m2, m3, _] = commuting_basis_su3();
        let l = |a| gell_mann(a).unwrap();
        let s3 = 3f64.sqrt();
        let m1_span = l(1) - l(8).scale_real(1.0 / s3);
        let m2_span = l(4) - l(3).scale_real(0.5) + l(8).scale_real(1.0 / (2.0 * s3));
        let m3_span = l(6) + l(3).scale_real(0.5) + l(8).scale_real(1.0 / (2.0 * s3));
        assert!(m1.max_abs_diff(&m1_span) < 1e-15);
        assert!(m2.max_abs_diff(&m2_span) < 1e-15);
        assert!(m3.max_abs_diff(&m3_span) < 1e-15);
        // lambda_1 + lambda_3/sqrt(3) differs from M1 and breaks the symmetry.
        let alt = l(1) + l(3).scale_real(1.0 / s3);
        assert!(alt.max_abs_diff(&m1) > 0.1);
        let h = build_hamiltonian(&HamiltonianSpec::periodic_triple(1.0)).unwrap();
        assert!(h.commutator(&alt).max_abs() > 0.1);
    }

    #[test]
    fn shifted_generators_are_involutions_commuting_with_h() {
        let h = build_hamiltonian(&HamiltonianSpec::periodic_triple(2.0)).unwrap();
        let [p1, ..] = shifted_generators();
        let listed = ComplexMatrix::from_real_row_slice(3, &[0., 1., 0., 1., 0., 0., 0., 0., 1.]).unwrap();
        assert_eq!(p1, listed);
        for m in shifted_generators() {
            assert!((&m * &m).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
            assert!(h.commutator(&m).max_abs() < 1e-14);
        }
    }

    #[test]
    fn mixing_angle_values_and_eigenvectors() {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        assert!((mixing_angle(1.0, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((mixing_angle(1.0, 2.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!(mixing_angle(1.0, -2.0).unwrap() > FRAC_PI_2);
        assert!(mixing_angle(0.0, 1.0).is_err());

        for &(nu, de) in &[(1.0, 2.0), (0.3, -1.1), (2.0, 0.5)] {
            let theta = mixing_angle(nu, de).unwrap();
            let h = build_hamiltonian(&HamiltonianSpec::asymmetric_double(nu, de)).unwrap();
            let s = spectrum(&h).unwrap();
            let (sh, ch) = ((theta / 2.0).sin(), (theta / 2.0).cos());
            let ground = s.eigenvector(0);
            let excited = s.eigenvector(1);
            // eigenvectors are real here; compare up to sign
            let g = [ground[0].re, ground[1].re];
            let e = [excited[0].re, excited[1].re];
            let same = |v: [f64; 2], w: [f64; 2]| {
                ((v[0] - w[0]).abs() < 1e-12 && (v[1] - w[1]).abs() < 1e-12)
                    || ((v[0] + w[0]).abs() < 1e-12 && (v[1] + w[1]).abs() < 1e-12)
            };
            assert!(same(g, [sh, ch]), "ground {g:?}");
            assert!(same(e, [ch, -sh]), "excited {e:?}");
        }
    }

    #[test]
    fn modular_momentum_vectors() {
        let states = modular_momentum_states(3, 2.0 * PI, 1.0).unwrap();
        let u = 1.0 / 3f64.sqrt();
        assert!(states[0].vector.iter().all(|z| (z - C64::new(u, 0.0)).norm() < 1e-15));
        assert!((states[1].momentum - 1.0).abs() < 1e-15);

        let j = cyclic_current(3).unwrap();
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let expected = DVector::from_vec(vec![ONE * u, w * u, w * w * u]);
        assert!((&states[1].vector - &expected).norm() < 1e-15);
        let jv = j.apply(&states[1].vector);
        assert!((jv - &states[1].vector * C64::new(3f64.sqrt(), 0.0)).norm() < 1e-14);

        let s4 = modular_momentum_states(4, 1.0, 1.0).unwrap();
        let expected = DVector::from_vec(vec![ONE, I, -ONE, -I]) * C64::new(0.5, 0.0);
        assert!((&s4[1].vector - expected).norm() < 1e-15);
        let h4 = build_hamiltonian(&HamiltonianSpec::cyclic_chain(4, 1.0)).unwrap();
        assert!(h4.apply(&s4[1].vector).norm() < 1e-15);
    }

    #[test]
    fn modular_momentum_states_diagonalize_rings() {
        for d in 3..=10 {
            let nu = 0.9;
            let h = build_hamiltonian(&HamiltonianSpec::cyclic_chain(d, nu)).unwrap();
            let j = cyclic_current(d).unwrap();
            for s in modular_momentum_states(d, 1.0, 1.0).unwrap() {
                let e = C64::new(cyclic_band_energy(nu, s.n, d), 0.0);
                assert!((h.apply(&s.vector) - &s.vector * e).norm() < 1e-13);
                let c = C64::new(cyclic_current_eigenvalue(s.n, d), 0.0);
                assert!((j.apply(&s.vector) - &s.vector * c).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn perturbation_generators() {
        let tilt = PerturbationSpec::new(PerturbationKind::DiagonalTilt(vec![0.2, 0.3, -0.5]), 1.0);
        let m = tilt.matrix(3).unwrap();
        let e: Vec<f64> = (0..3).map(|k| m.get(k, k).re).collect();
        assert!((e[0] - e[1] - 0.2).abs() < 1e-15);
        assert!((e[1] - e[2] - 0.3).abs() < 1e-15);
        assert!(m.trace().norm() < 1e-15);
        let bad = PerturbationSpec::new(PerturbationKind::DiagonalTilt(vec![0.2, 0.3, 0.1]), 1.0);
        assert!(bad.matrix(3).is_err());

        let mut coeffs = [0.0; 8];
        coeffs[1] = 1.0;
        coeffs[4] = -1.0;
        coeffs[6] = 1.0;
        let combo = PerturbationSpec::new(PerturbationKind::GellMannCombination(coeffs), 2.0);
        assert!(combo.matrix(3).unwrap().max_abs_diff(&cyclic_current(3).unwrap().scale_real(2.0)) < 1e-15);
        assert!(PerturbationSpec::new(PerturbationKind::M1, 1.0).matrix(4).is_err());
        assert_eq!(
            PerturbationSpec::new(PerturbationKind::CyclicCurrent, 1.0).matrix(5).unwrap(),
            cyclic_current(5).unwrap()
        );
    }

    #[test]
    fn thermal_values() {
        let r = thermal_check(H_PLANCK * 1e10, 0.020, None).unwrap();
        assert!((r.ratio - K_B * 0.020 / (H_PLANCK * 1e10)).abs() < 1e-15);
        assert!((r.ratio - 0.0417).abs() < 1e-3);
        assert!(r.pass);
        let cold = thermal_check(H_PLANCK * 1e10, 1e-12, Some(H_PLANCK * 1e11)).unwrap();
        assert!(cold.ratio < 1e-9 && cold.pass);
        assert!(cold.min_tilt_angle.unwrap() < 1e-9);
        // 1 K sits near 20 GHz
        let f = thermal_frequency(1.0);
        assert!((f - 20.836_6e9).abs() < 1e6, "{f}");
        assert!(!thermal_check(H_PLANCK * 1e9, 1.0, None).unwrap().pass);
        assert!(thermal_check(0.0, 1.0, None).is_err());
        assert!(thermal_check(1.0, 0.0, None).is_err());
    }

    #[test]
    fn squid_symmetric_double_well() {
        let l = squid_landscape(PI, 3.0, 1.0, 1.0).unwrap();
        assert!(!l.single_well);
        assert!(l.delta_eps.unwrap().abs() < 1e-12);
        let (pl, _) = l.left_minimum.unwrap();
        let (pr, _) = l.right_minimum.unwrap();
        assert!((pl + pr - 2.0 * PI).abs() < 1e-8);
        // with u = phi - pi the minima satisfy u = beta sin(u)
        let u = pr - PI;
        assert!((u - 3.0 * u.sin()).abs() < 1e-8);
        let (pt, vt) = l.barrier_top.unwrap();
        assert!((pt - PI).abs() < 1e-8);
        assert!((vt - squid_potential(PI, PI, 3.0, 1.0, 1.0).unwrap()).abs() < 1e-12);
        assert!(l.barrier_height.unwrap() > 0.0);
    }

    #[test]
    fn squid_single_well_when_beta_small() {
        for beta in [-0.5, 0.0, 0.5, 0.99] {
            let l = squid_landscape(PI, beta, 1.0, 1.0).unwrap();
            assert!(l.single_well, "beta = {beta}");
            assert!(l.delta_eps.is_none());
        }
        assert!(squid_potential(0.0, 0.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn squid_flux_bias_tilts_monotonically() {
        let mut last = -1.0;
        for k in 0..=20 {
            let phi_x = PI + 0.02 * k as f64;
            let l = squid_landscape(phi_x, 3.0, 2.0, 1.5).unwrap();
            assert!(!l.single_well);
            let de = l.delta_eps.unwrap().abs();
            assert!(de > last, "phi_x = {phi_x}");
            last = de;
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = HamiltonianSpec::cyclic_chain(6, 0.25);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"topology":"CyclicChain","nu":0.25,"delta_eps":0.0,"d":6}"#);
        assert_eq!(serde_json::from_str::<HamiltonianSpec>(&text).unwrap(), spec);
        let p = PerturbationSpec::new(PerturbationKind::DiagonalTilt(vec![1.0, -1.0]), 0.5);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<PerturbationSpec>(&text).unwrap(), p);
        assert_eq!("periodic-triple".parse::<Topology>().unwrap(), Topology::PeriodicTriple);
        assert_eq!("cyclic".parse::<Topology>().unwrap(), Topology::CyclicChain);
        assert!("hexagonal".parse::<Topology>().is_err());
    }
}
