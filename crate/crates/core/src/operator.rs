//! Dense complex operator algebra for small qudit systems.
//!
//! Everything in the toolkit (Hamiltonians, generators, gates, observables) is a
//! [`ComplexMatrix`]. This module provides the Pauli and Gell-Mann generator
//! sets, SU(3) structure constants computed from commutators, a Hermitian
//! eigensolver with deterministic ordering, spectral exponentials and the
//! global-phase-insensitive distance used to compare gates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const I: C64 = C64::new(0.0, 1.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

/// Square, finite, complex matrix of dimension `dim >= 1`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Wraps an nalgebra matrix after checking it is square, non-empty and finite.
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::NotSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        if inner.nrows() == 0 {
            return Err(Error::Empty);
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { inner })
    }

    pub(crate) fn from_inner(inner: DMatrix<C64>) -> Self {
        debug_assert!(inner.is_square() && inner.nrows() > 0);
        Self { inner }
    }

    /// Builds a matrix from row-major complex entries.
    pub fn from_row_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty);
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_slice(dim, &c)
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_row_slice(dim, &flat)
    }

    /// # Panics
    /// Panics if `dim == 0`.
    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "identity of dimension zero");
        Self::from_inner(DMatrix::identity(dim, dim))
    }

    /// # Panics
    /// Panics if `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero matrix of dimension zero");
        Self::from_inner(DMatrix::zeros(dim, dim))
    }

    /// Real diagonal matrix.
    ///
    /// # Panics
    /// Panics if `values` is empty.
    pub fn diagonal(values: &[f64]) -> Self {
        let d: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diagonal_complex(&d)
    }

    /// # Panics
    /// Panics if `values` is empty.
    pub fn diagonal_complex(values: &[C64]) -> Self {
        assert!(!values.is_empty(), "diagonal matrix of dimension zero");
        Self::from_inner(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    /// Permutation matrix sending basis vector `e_j` to `e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        let mut seen = vec![false; dim];
        for &p in perm {
            if p >= dim || seen[p] {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (j, &p) in perm.iter().enumerate() {
            m[(p, j)] = ONE;
        }
        Ok(Self::from_inner(m))
    }

    /// Rank-one projector `|v><w|`.
    pub fn outer(v: &DVector<C64>, w: &DVector<C64>) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: w.len(),
            });
        }
        Self::new(v * w.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.inner
    }

    pub fn column(&self, j: usize) -> DVector<C64> {
        self.inner.column(j).into_owned()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_inner(self.inner.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max |H - H^dagger|` entrywise.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `max |U^dagger U - I|` entrywise.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.inner.adjoint() * &self.inner;
        let id = DMatrix::<C64>::identity(self.dim(), self.dim());
        prod.iter()
            .zip(id.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_inner(&self.inner * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.inner * v
    }

    /// Nested `[re, im]` pairs, row-major.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| {
                        let z = self.inner[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|p| C64::new(p[0], p[1])).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            write!(f, "  ")?;
            for j in 0..self.dim() {
                let z = self.inner[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        ComplexMatrix::from_pairs(&rows).map_err(serde::de::Error::custom)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
                ComplexMatrix::from_inner(&self.inner $op &rhs.inner)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                &self $op &rhs
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                &self $op rhs
            }
        }
        impl $trait<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                self $op &rhs
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_inner(-self.inner)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_inner(-&self.inner)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<C64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

/// Pauli matrix `sigma_i` for `i` in 1..=3 (x, y, z).
pub fn pauli(i: usize) -> Result<ComplexMatrix> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let entries = match i {
        1 => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        2 => [c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
        3 => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
        _ => {
            return Err(Error::IndexOutOfRange {
                what: "Pauli",
                index: i,
                min: 1,
                max: 3,
            })
        }
    };
    ComplexMatrix::from_row_slice(2, &entries)
}

/// Gell-Mann matrix `lambda_a` for `a` in 1..=8.
pub fn gell_mann(a: usize) -> Result<ComplexMatrix> {
    if !(1..=8).contains(&a) {
        return Err(Error::IndexOutOfRange {
            what: "Gell-Mann",
            index: a,
            min: 1,
            max: 8,
        });
    }
    let mut m = DMatrix::<C64>::zeros(3, 3);
    let mut sym = |i: usize, j: usize| {
        m[(i, j)] = ONE;
        m[(j, i)] = ONE;
    };
    match a {
        1 => sym(0, 1),
        4 => sym(0, 2),
        6 => sym(1, 2),
        _ => {}
    }
    let mut anti = |i: usize, j: usize| {
        m[(i, j)] = -I;
        m[(j, i)] = I;
    };
    match a {
        2 => anti(0, 1),
        5 => anti(0, 2),
        7 => anti(1, 2),
        _ => {}
    }
    match a {
        3 => {
            m[(0, 0)] = ONE;
            m[(1, 1)] = -ONE;
        }
        8 => {
            let s = 1.0 / 3f64.sqrt();
            m[(0, 0)] = C64::new(s, 0.0);
            m[(1, 1)] = C64::new(s, 0.0);
            m[(2, 2)] = C64::new(-2.0 * s, 0.0);
        }
        _ => {}
    }
    Ok(ComplexMatrix::from_inner(m))
}

/// All eight Gell-Mann matrices, `lambda_1` first.
pub fn gell_mann_set() -> [ComplexMatrix; 8] {
    std::array::from_fn(|k| gell_mann(k + 1).expect("index in range"))
}

/// Completely antisymmetric SU(3) structure constants `f_ijk`, defined by
/// `[lambda_i, lambda_j] = 2i f_ijk lambda_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureConstants {
    entries: BTreeMap<(usize, usize, usize), f64>,
}

impl StructureConstants {
    /// `f_ijk` with 1-based indices; zero for absent or out-of-range triples.
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries.get(&(i, j, k)).copied().unwrap_or(0.0)
    }

    /// Nonzero entries over all index orderings.
    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Nonzero entries with `i < j < k`.
    pub fn canonical(&self) -> Vec<((usize, usize, usize), f64)> {
        self.nonzero()
            .filter(|&((i, j, k), _)| i < j && j < k)
            .collect()
    }
}

/// Computes `f_ijk = Tr([lambda_i, lambda_j] lambda_k) / (4i)` for every triple.
///
/// The table follows from the matrices alone. Note `f_156 = -1/2` while
/// `f_157 = 0`.
pub fn structure_constants() -> StructureConstants {
    let lambda = gell_mann_set();
    let mut entries = BTreeMap::new();
    for i in 0..8 {
        for j in 0..8 {
            let comm = lambda[i].commutator(&lambda[j]);
            for (k, lk) in lambda.iter().enumerate() {
                let f = ((&comm * lk).trace() / (4.0 * I)).re;
                if f.abs() > 1e-12 {
                    entries.insert((i + 1, j + 1, k + 1), f);
                }
            }
        }
    }
    StructureConstants { entries }
}

/// Sorted eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, paired with `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
    /// Index partition; consecutive eigenvalues closer than `group_tol` share a group.
    pub degeneracy_groups: Vec<Vec<usize>>,
    pub group_tol: f64,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> DVector<C64> {
        self.eigenvectors.column(j)
    }

    /// Mean energy and multiplicity of each degeneracy group.
    pub fn levels(&self) -> Vec<(f64, usize)> {
        self.degeneracy_groups
            .iter()
            .map(|g| {
                let mean = g.iter().map(|&i| self.eigenvalues[i]).sum::<f64>() / g.len() as f64;
                (mean, g.len())
            })
            .collect()
    }

    /// `V diag(E) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = self.eigenvectors.as_matrix();
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&e| C64::new(e, 0.0)),
        ));
        ComplexMatrix::from_inner(v * d * v.adjoint())
    }

    /// `V diag(f(E)) V^dagger` for a complex-valued function of the energy.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = self.eigenvectors.as_matrix();
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&e| f(e)),
        ));
        ComplexMatrix::from_inner(v * d * v.adjoint())
    }

    /// `exp(-i H t / hbar)`.
    pub fn propagator(&self, t: f64, hbar: f64) -> ComplexMatrix {
        self.map(|e| (-I * (e * t / hbar)).exp())
    }
}

/// Default degeneracy tolerance `1e-9 * max(1, ||H||)` with the spectral norm.
pub fn default_group_tol(eigenvalues: &[f64]) -> f64 {
    let norm = eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    1e-9 * norm.max(1.0)
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let deviation = h.hermiticity_deviation();
    if deviation > 1e-10 * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Hermitian eigendecomposition with the default degeneracy tolerance.
pub fn spectrum(h: &ComplexMatrix) -> Result<Spectrum> {
    hermitian_eig(h, None)
}

/// Hermitian eigendecomposition.
///
/// Eigenvalues ascend. Each eigenvector is phase-fixed so its first nonzero
/// component is real and positive; inside a degeneracy group vectors are
/// ordered lexicographically by their components.
pub fn hermitian_eig(h: &ComplexMatrix, group_tol: Option<f64>) -> Result<Spectrum> {
    check_hermitian(h)?;
    let n = h.dim();
    let sym = (h.as_matrix() + h.as_matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);

    let mut pairs: Vec<(f64, DVector<C64>)> = (0..n)
        .map(|j| {
            let mut v = eig.eigenvectors.column(j).into_owned();
            let norm = v.norm();
            v /= C64::new(norm, 0.0);
            if let Some(first) = v.iter().find(|z| z.norm() > 1e-10).copied() {
                v *= first.conj() / first.norm();
            }
            (eig.eigenvalues[j], v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let tol = group_tol.unwrap_or_else(|| default_group_tol(&eigenvalues));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match groups.last_mut() {
            Some(g) if eigenvalues[i] - eigenvalues[*g.last().unwrap()] <= tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }

    for g in &groups {
        if g.len() < 2 {
            continue;
        }
        let mut members: Vec<(f64, DVector<C64>)> = g.iter().map(|&i| pairs[i].clone()).collect();
        members.sort_by(|a, b| lexicographic(&a.1, &b.1));
        for (&i, m) in g.iter().zip(members) {
            pairs[i] = m;
        }
    }

    let mut vecs = DMatrix::<C64>::zeros(n, n);
    for (j, (_, v)) in pairs.iter().enumerate() {
        vecs.set_column(j, v);
    }
    Ok(Spectrum {
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        eigenvectors: ComplexMatrix::from_inner(vecs),
        degeneracy_groups: groups,
        group_tol: tol,
    })
}

fn lexicographic(a: &DVector<C64>, b: &DVector<C64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// `exp(-i H t / hbar)` through the spectral decomposition.
pub fn unitary_exp(h: &ComplexMatrix, t: f64, hbar: f64) -> Result<ComplexMatrix> {
    if hbar <= 0.0 || !hbar.is_finite() || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t = {t}, hbar = {hbar}")));
    }
    Ok(spectrum(h)?.propagator(t, hbar))
}

/// Phase `gamma` minimizing `||U - e^{i gamma} V||_F`, i.e. `arg Tr(V^dagger U)`.
pub fn optimal_phase(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let overlap = (v.as_matrix().adjoint() * u.as_matrix()).trace();
    Ok(if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 })
}

/// `min_gamma ||U - e^{i gamma} V||_F`.
///
/// Equal to `sqrt(||U||^2 + ||V||^2 - 2|Tr(V^dagger U)|)`. The optimal phase is
/// taken in closed form and the residual norm is then evaluated entrywise,
/// which keeps full relative precision for nearly equal gates.
pub fn global_phase_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    let gamma = optimal_phase(u, v)?;
    Ok(u.distance(&v.scale(C64::from_polar(1.0, gamma))))
}

/// Haar-distributed random unitary of dimension `dim`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim > 0, "Haar unitary of dimension zero");
    let z = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) / std::f64::consts::SQRT_2
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    ComplexMatrix::from_inner(q)
}

/// Haar-random unitary rescaled to unit determinant.
pub fn haar_special_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let u = haar_unitary(dim, rng);
    let det = u.as_matrix().determinant();
    u.scale(C64::from_polar(1.0, -det.arg() / dim as f64))
}
