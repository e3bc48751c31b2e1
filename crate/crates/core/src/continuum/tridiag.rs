//! Lowest eigenpairs of real symmetric tridiagonal matrices, optionally with
//! the corner entries `(0, n-1)` of a cyclic chain.
//!
//! The corner is handled by treating the last row as an arrow row: a single
//! LDL^T sweep over the chain accumulates its fill-in. The same factorization
//! gives Sylvester inertia for bisection and the solves for inverse iteration.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples `i` and `i + 1`.
    pub off: Vec<f64>,
    /// Couples `0` and `n - 1`; zero for an open chain.
    pub corner: f64,
}

struct Factorization {
    pivots: Vec<f64>,
    /// Chain multipliers `l_i` for `i < n - 2`.
    l: Vec<f64>,
    /// Arrow-row multipliers `g_i` for `i < n - 1`.
    g: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>, corner: f64) -> Result<Self> {
        if diag.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal solver needs n >= 3, got {}",
                diag.len()
            )));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: off.len(),
            });
        }
        if diag.iter().chain(&off).any(|x| !x.is_finite()) || !corner.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { diag, off, corner })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            if i == 0 || i == n - 1 {
                r += self.corner.abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// `y = T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n - 1 {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y[0] += self.corner * x[n - 1];
        y[n - 1] += self.corner * x[0];
        y
    }

    fn factor(&self, sigma: f64) -> Factorization {
        let n = self.len();
        let m = n - 1; // arrow row
        let tiny = f64::EPSILON * self.scale();
        let guard = |p: f64| if p.abs() < tiny { if p < 0.0 { -tiny } else { tiny } } else { p };
        // coupling of chain row i to the arrow row
        let arrow = |i: usize| {
            let mut b = 0.0;
            if i == 0 {
                b += self.corner;
            }
            if i == m - 1 {
                b += self.off[m - 1];
            }
            b
        };
        let mut pivots = Vec::with_capacity(n);
        let mut l = Vec::with_capacity(m.saturating_sub(1));
        let mut g = Vec::with_capacity(m);
        let mut p = guard(self.diag[0] - sigma);
        let mut f = arrow(0);
        let mut last = self.diag[m] - sigma;
        for i in 0..m - 1 {
            pivots.push(p);
            let li = self.off[i] / p;
            let gi = f / p;
            last -= f * gi;
            l.push(li);
            g.push(gi);
            let next_f = arrow(i + 1) - li * f;
            p = guard((self.diag[i + 1] - sigma) - self.off[i] * li);
            f = next_f;
        }
        pivots.push(p);
        let gi = f / p;
        last -= f * gi;
        g.push(gi);
        pivots.push(guard(last));
        Factorization { pivots, l, g }
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        self.factor(sigma).pivots.iter().filter(|p| **p < 0.0).count()
    }

    fn solve(f: &Factorization, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let m = n - 1;
        let mut z = b.to_vec();
        for i in 0..m - 1 {
            z[i + 1] -= f.l[i] * z[i];
        }
        let mut acc = 0.0;
        for i in 0..m {
            acc += f.g[i] * z[i];
        }
        z[m] -= acc;
        for i in 0..n {
            z[i] /= f.pivots[i];
        }
        let mut x = z;
        x[m - 1] -= f.g[m - 1] * x[m];
        for i in (0..m - 1).rev() {
            x[i] -= f.l[i] * x[i + 1] + f.g[i] * x[m];
        }
        x
    }

    /// The `k` lowest eigenvalues by bisection, ascending.
    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(Error::InsufficientLevels {
                needed: k,
                available: self.len(),
            });
        }
        let (glo, ghi) = self.bounds();
        let tol = 2.0 * f64::EPSILON * self.scale();
        let mut out = Vec::with_capacity(k);
        let mut floor = glo;
        for j in 0..k {
            let (mut lo, mut hi) = (floor, ghi);
            for _ in 0..200 {
                if hi - lo <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let lambda = 0.5 * (lo + hi);
            out.push(lambda);
            floor = lo;
        }
        Ok(out)
    }

    /// Lowest `k` eigenpairs; eigenvectors have unit Euclidean norm.
    pub fn lowest_eigenpairs(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let values = self.lowest_eigenvalues(k)?;
        let n = self.len();
        let scale = self.scale();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        for (j, &lambda) in values.iter().enumerate() {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for attempt in 0..4 {
                let shift = lambda + attempt as f64 * 1e-10 * scale * if attempt % 2 == 0 { 1.0 } else { -1.0 };
                let f = self.factor(shift);
                let mut v = start_vector(n, j + 7 * attempt);
                orthonormalize(&mut v, &vectors)?;
                for _ in 0..4 {
                    v = Self::solve(&f, &v);
                    orthonormalize(&mut v, &vectors)?;
                }
                let tv = self.apply(&v);
                let residual = tv.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
                let better = best.as_ref().is_none_or(|(r, _)| residual < *r);
                if better {
                    best = Some((residual, v));
                }
                if residual <= 1e-9 * scale {
                    break;
                }
            }
            let (residual, v) = best.expect("at least one attempt");
            if residual > 1e-6 * scale {
                return Err(Error::Numerical(format!(
                    "inverse iteration for level {j} left residual {residual:e}"
                )));
            }
            vectors.push(v);
        }
        // Bisection inside a ring's band loses a few digits in the arrow-row
        // Schur complement; the Rayleigh quotient of the converged vector does not.
        let mut pairs: Vec<(f64, Vec<f64>)> = vectors
            .into_iter()
            .map(|v| {
                let tv = self.apply(&v);
                (v.iter().zip(&tv).map(|(a, b)| a * b).sum(), v)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(pairs.into_iter().unzip())
    }
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    // Deterministic, irregular, nonzero on every site.
    (0..n)
        .map(|i| {
            let t = (i as f64 + 1.0) * 12.9898 + (seed as f64 + 1.0) * 78.233;
            1.0 + 0.5 * (t.sin() * 43_758.545_3).fract()
        })
        .collect()
}

fn orthonormalize(v: &mut [f64], basis: &[Vec<f64>]) -> Result<()> {
    for _ in 0..2 {
        for b in basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Numerical("inverse iteration collapsed".into()));
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Ok(())
}
