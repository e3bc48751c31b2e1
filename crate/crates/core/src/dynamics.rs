//! Closed-system time evolution by exact diagonalization.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::operator::{global_phase_distance, spectrum, ComplexMatrix, Spectrum, C64};

/// Tolerance on the norm of a [`QuantumState`].
pub const NORM_TOL: f64 = 1e-12;
/// Default matrix-level tolerance for revival detection.
pub const DEFAULT_REVIVAL_TOL: f64 = 1e-9;
/// Default fidelity tolerance for revival detection.
pub const DEFAULT_FIDELITY_TOL: f64 = 1e-10;
/// Default bound on the denominators used to rationalize gap ratios.
pub const DEFAULT_MAX_HARMONIC: u64 = 4096;

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    amplitudes: DVector<C64>,
}

impl QuantumState {
    /// Wraps `amplitudes`, which must already be normalized.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty);
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `amplitudes` first.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amplitudes / C64::new(norm, 0.0))
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Basis state `e_k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty);
        }
        if k >= dim {
            return Err(Error::IndexOutOfRange {
                what: "basis state",
                index: k,
                min: 0,
                max: dim - 1,
            });
        }
        let mut v = DVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    /// Equal-amplitude superposition of all basis states.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty);
        }
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: DVector::from_element(dim, a),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> C64 {
        self.amplitudes[k]
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|<self|other>|^2`.
    pub fn overlap_probability(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

impl Serialize for QuantumState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.amplitudes.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuantumState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        let amps: Vec<C64> = pairs.iter().map(|p| C64::new(p[0], p[1])).collect();
        QuantumState::from_slice(&amps).map_err(serde::de::Error::custom)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_hermitian(1e-10 * h.max_abs().max(1.0)) {
        return Err(Error::NotHermitian {
            deviation: h.hermiticity_deviation(),
        });
    }
    Ok(())
}

fn check_hbar(hbar: f64) -> Result<()> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    Ok(())
}

/// `exp(-i H t / hbar) psi0`.
pub fn evolve(h: &ComplexMatrix, psi0: &QuantumState, t: f64, hbar: f64) -> Result<QuantumState> {
    check_dim(h.dim(), psi0.dim())?;
    check_hbar(hbar)?;
    let s = spectrum(h)?;
    Ok(evolve_in(&s, psi0, t, hbar))
}

/// Evolution using a precomputed eigendecomposition.
pub fn evolve_in(s: &Spectrum, psi0: &QuantumState, t: f64, hbar: f64) -> QuantumState {
    let v = s.eigenvectors.as_matrix();
    let mut c = v.adjoint() * &psi0.amplitudes;
    for (k, e) in s.eigenvalues.iter().enumerate() {
        c[k] *= C64::from_polar(1.0, -e * t / hbar);
    }
    let mut out = v * c;
    // Unitary evolution; remove the rounding drift in the norm.
    let norm = out.norm();
    out /= C64::new(norm, 0.0);
    QuantumState { amplitudes: out }
}

/// States at each of `times`, sharing a single diagonalization.
pub fn evolution_trace(
    h: &ComplexMatrix,
    psi0: &QuantumState,
    times: &[f64],
    hbar: f64,
) -> Result<Vec<(f64, QuantumState)>> {
    check_dim(h.dim(), psi0.dim())?;
    check_hbar(hbar)?;
    let s = spectrum(h)?;
    Ok(times.iter().map(|&t| (t, evolve_in(&s, psi0, t, hbar))).collect())
}

/// Right-well probability for a symmetric double well started in the left well.
pub fn rabi_probability(nu: f64, t: f64, hbar: f64) -> f64 {
    0.5 * (1.0 - (2.0 * nu * t / hbar).cos())
}

/// Time derivative of [`rabi_probability`].
pub fn rabi_probability_rate(nu: f64, t: f64, hbar: f64) -> f64 {
    nu / hbar * (2.0 * nu * t / hbar).sin()
}

/// `<psi|A|psi>` for Hermitian `A`.
pub fn expectation(psi: &QuantumState, a: &ComplexMatrix) -> Result<f64> {
    check_dim(a.dim(), psi.dim())?;
    check_hermitian(a)?;
    Ok(psi.amplitudes.dotc(&a.apply(&psi.amplitudes)).re)
}

/// Spectrum of `H + eps dH`.
pub fn degeneracy_split(h: &ComplexMatrix, dh: &ComplexMatrix, eps: f64) -> Result<Spectrum> {
    check_dim(h.dim(), dh.dim())?;
    check_hermitian(h)?;
    check_hermitian(dh)?;
    spectrum(&(h + dh.scale_real(eps)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevivalReport {
    pub found: bool,
    /// Smallest verified revival time; zero when every gap vanishes.
    pub period: Option<f64>,
    /// `min_k |<e_k| U(T) |e_k>|` over the standard basis, at the candidate period.
    pub fidelity_at_period: f64,
    /// Phase-insensitive distance between `U(T)` and the identity.
    pub phase_distance: f64,
    /// Longest period the search could produce.
    pub search_bound: f64,
    /// Multiple of the smallest gap that fixes the period (the LCM of the ratio denominators).
    pub harmonic: u64,
}

/// Best rational approximation of `x >= 0` with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: u64) -> (u64, u64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    let mut best = (x.round() as u64, 1u64);
    for _ in 0..64 {
        let a = r.floor();
        if a > u64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = match (a.checked_mul(p1).and_then(|v| v.checked_add(p0)), a.checked_mul(q1).and_then(|v| v.checked_add(q0))) {
            (Some(p), Some(q)) => (p, q),
            _ => break,
        };
        if q2 > max_den {
            break;
        }
        best = (p2, q2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 * (1.0 + x) {
            break;
        }
        r = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    best
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Searches for a time `T` with `exp(-i H T / hbar)` equal to a global phase.
///
/// Gaps above the ground level are normalized by the smallest nonzero gap and
/// rationalized by continued fractions (denominators up to `max_harmonic`).
/// The candidate period from the common denominator is then checked directly
/// on the propagator, so a report with `found` set is always verified.
pub fn revival_period(h: &ComplexMatrix, hbar: f64, tol: f64, max_harmonic: u64) -> Result<RevivalReport> {
    check_hermitian(h)?;
    check_hbar(hbar)?;
    if !(tol > 0.0) || max_harmonic == 0 {
        return Err(Error::InvalidParameter("tol and max_harmonic must be positive".into()));
    }
    let s = spectrum(h)?;
    let e = &s.eigenvalues;
    let scale = e.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let zero = s.group_tol.max(1e-12 * scale);
    let gaps: Vec<f64> = e.iter().map(|x| x - e[0]).filter(|g| *g > zero).collect();
    let Some(&g_min) = gaps.iter().min_by(|a, b| a.total_cmp(b)) else {
        // Every level is degenerate: the propagator is a pure phase at all times.
        return Ok(RevivalReport {
            found: true,
            period: Some(0.0),
            fidelity_at_period: 1.0,
            phase_distance: 0.0,
            search_bound: 0.0,
            harmonic: 0,
        });
    };
    let search_bound = 2.0 * PI * hbar * max_harmonic as f64 / g_min;
    let mut lcm = 1u64;
    for g in &gaps {
        let (_, q) = rationalize(g / g_min, max_harmonic);
        lcm = lcm / gcd(lcm, q) * q;
        if lcm > max_harmonic {
            return Ok(RevivalReport {
                found: false,
                period: None,
                fidelity_at_period: 0.0,
                phase_distance: f64::NAN,
                search_bound,
                harmonic: lcm,
            });
        }
    }
    let period = 2.0 * PI * hbar * lcm as f64 / g_min;
    let u = s.propagator(period, hbar);
    let phase_distance = global_phase_distance(&u, &ComplexMatrix::identity(u.dim()))?;
    let fidelity = (0..u.dim()).map(|k| u.get(k, k).norm()).fold(f64::INFINITY, f64::min);
    let found = phase_distance <= tol && 1.0 - fidelity <= DEFAULT_FIDELITY_TOL.max(tol * tol);
    Ok(RevivalReport {
        found,
        period: found.then_some(period),
        fidelity_at_period: fidelity,
        phase_distance,
        search_bound,
        harmonic: lcm,
    })
}

/// [`revival_period`] with the default tolerance and harmonic bound.
pub fn revival_period_default(h: &ComplexMatrix, hbar: f64) -> Result<RevivalReport> {
    revival_period(h, hbar, DEFAULT_REVIVAL_TOL, DEFAULT_MAX_HARMONIC)
}
