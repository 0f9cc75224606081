//! Validated density matrices, pure states and Hermitian spectra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{CoherenceError, Result};
use crate::tolerance::Tolerances;
use crate::C64;

const EIGEN_MAX_SWEEPS: usize = 10_000;

/// A `d x d` complex Hermitian, positive semidefinite, trace-one matrix.
///
/// Instances are immutable. The only way to obtain one is through validation
/// ([`DensityMatrix::from_rows`], [`DensityMatrix::from_matrix`]) or through
/// crate-internal constructions that preserve the axioms exactly (projectors,
/// convex mixtures of valid states).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

/// Eigen-decomposition of a density matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<PureState>,
}

/// A unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: DVector<C64>,
}

impl DensityMatrix {
    /// Builds a density matrix from a row-major grid of entries.
    pub fn from_rows(rows: &[Vec<C64>], tol: &Tolerances) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(CoherenceError::Empty);
        }
        if let Some((bad_row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(CoherenceError::NotSquare {
                rows: d,
                bad_row,
                cols: r.len(),
            });
        }
        let m = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        Self::from_matrix(m, tol)
    }

    /// Validates an arbitrary complex matrix against the density-matrix axioms.
    ///
    /// Asymmetry up to `tol.herm` is removed by replacing the input with
    /// `(m + m^dagger) / 2` before the trace and positivity checks.
    pub fn from_matrix(m: DMatrix<C64>, tol: &Tolerances) -> Result<Self> {
        let (r, c) = m.shape();
        if r == 0 || c == 0 {
            return Err(CoherenceError::Empty);
        }
        if r != c {
            return Err(CoherenceError::NotSquare {
                rows: r,
                bad_row: 0,
                cols: c,
            });
        }
        for j in 0..c {
            for i in 0..r {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(CoherenceError::NonFinite { row: i, col: j });
                }
            }
        }
        let asymmetry = max_asymmetry(&m);
        if asymmetry > tol.herm {
            return Err(CoherenceError::NotHermitian { asymmetry });
        }
        let h = hermitize(&m);
        let trace: f64 = (0..r).map(|k| h[(k, k)].re).sum();
        if (trace - 1.0).abs() > tol.trace {
            return Err(CoherenceError::TraceNotOne { trace });
        }
        let evals = hermitian_eigen(&h)?.eigenvalues;
        let min_eigenvalue = evals.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -tol.psd {
            return Err(CoherenceError::NotPsd { min_eigenvalue });
        }
        Ok(Self { m: h })
    }

    /// Wraps a matrix known to be Hermitian PSD by construction.
    pub(crate) fn from_trusted(m: DMatrix<C64>) -> Self {
        Self { m: hermitize(&m) }
    }

    /// `I / d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_trusted(DMatrix::from_diagonal_element(d, d, C64::new(1.0 / d as f64, 0.0)))
    }

    /// Diagonal state with the given populations. They must be nonnegative and sum to one.
    pub fn diagonal_state(populations: &[f64], tol: &Tolerances) -> Result<Self> {
        let d = populations.len();
        let m = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(populations[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self::from_matrix(m, tol)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// Entry `rho_ij` (0-based).
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    /// The real diagonal `rho_kk`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.m[(k, k)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// `tr(rho^2) = sum_ij |rho_ij|^2`.
    pub fn purity(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)]).collect())
            .collect()
    }

    /// Eigenvalues (descending) and orthonormal eigenvectors.
    ///
    /// Eigenvalues within `tol.psd` of 0 or 1 are clamped onto `[0, 1]`.
    pub fn spectrum(&self, tol: &Tolerances) -> Result<Spectrum> {
        let eig = hermitian_eigen(&self.m)?;
        let d = self.dim();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut eigenvalues = Vec::with_capacity(d);
        let mut eigenvectors = Vec::with_capacity(d);
        for &k in &order {
            let mut lam = eig.eigenvalues[k];
            if lam < 0.0 && lam >= -tol.psd {
                lam = 0.0;
            } else if lam > 1.0 && lam <= 1.0 + tol.psd {
                lam = 1.0;
            }
            eigenvalues.push(lam);
            let v = eig.eigenvectors.column(k).into_owned();
            let n = v.norm();
            eigenvectors.push(PureState { amps: v.unscale(n) });
        }
        Ok(Spectrum {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Smallest eigenvalue, unclamped.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&self.m)?
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }

    /// Number of eigenvalues above `tol.psd`.
    pub fn rank(&self, tol: &Tolerances) -> Result<usize> {
        Ok(self
            .spectrum(tol)?
            .eigenvalues
            .iter()
            .filter(|&&l| l > tol.psd)
            .count())
    }

    /// Keeps the rows and columns listed in `kept` (0-based, strictly increasing).
    ///
    /// With `check_trace` the removed diagonal mass must be below `tol.trace`, so
    /// the result is again a normalized state. Without it the result inherits
    /// Hermiticity and positivity but may be sub-normalized.
    pub fn principal_submatrix(
        &self,
        kept: &[usize],
        check_trace: bool,
        tol: &Tolerances,
    ) -> Result<DensityMatrix> {
        let d = self.dim();
        if kept.is_empty() {
            return Err(CoherenceError::InvalidIndices("no index kept".into()));
        }
        if let Some(&bad) = kept.iter().find(|&&k| k >= d) {
            return Err(CoherenceError::IndexOutOfRange { index: bad, dim: d });
        }
        if kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoherenceError::InvalidIndices(
                "indices must be strictly increasing".into(),
            ));
        }
        let n = kept.len();
        let sub = DMatrix::from_fn(n, n, |i, j| self.m[(kept[i], kept[j])]);
        let out = DensityMatrix { m: sub };
        if check_trace {
            let trace = out.trace();
            if (trace - 1.0).abs() > tol.trace {
                return Err(CoherenceError::TraceNotOne { trace });
            }
        }
        Ok(out)
    }

    /// The `k`-th lower diagonal in 1-based numbering: `rho_{k,1}, rho_{k+1,2},
    /// ..., rho_{d,d-k+1}`. Valid for `2 <= k <= d`.
    pub fn subdiagonal(&self, k: usize) -> Result<Vec<C64>> {
        let d = self.dim();
        if k < 2 || k > d {
            return Err(CoherenceError::IndexOutOfRange { index: k, dim: d });
        }
        let offset = k - 1;
        Ok((0..d - offset).map(|j| self.m[(j + offset, j)]).collect())
    }

    /// Largest off-diagonal modulus in row/column `k` (0-based).
    pub fn max_offdiag_in_line(&self, k: usize) -> f64 {
        (0..self.dim())
            .filter(|&i| i != k)
            .map(|i| self.m[(i, k)].norm().max(self.m[(k, i)].norm()))
            .fold(0.0, f64::max)
    }
}

impl Spectrum {
    /// `sum_k lambda_k v_k v_k^dagger`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let d = self.eigenvalues.len();
        let mut m = DMatrix::zeros(d, d);
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m += v.amps() * v.amps().adjoint() * C64::new(*lam, 0.0);
        }
        m
    }
}

impl PureState {
    /// Validates a unit-norm amplitude vector.
    pub fn new(amps: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        if amps.is_empty() {
            return Err(CoherenceError::Empty);
        }
        if let Some(i) = amps.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoherenceError::NonFinite { row: i, col: 0 });
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol.norm {
            return Err(CoherenceError::NotNormalized { norm_sq });
        }
        Ok(Self {
            amps: DVector::from_vec(amps),
        })
    }

    /// Rescales any nonzero finite vector to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(amps))
    }

    pub(crate) fn from_vector(v: DVector<C64>) -> Result<Self> {
        if v.is_empty() {
            return Err(CoherenceError::Empty);
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoherenceError::InvalidInput("non-finite amplitude".into()));
        }
        let n = v.norm();
        if n == 0.0 {
            return Err(CoherenceError::AllZeros);
        }
        Ok(Self { amps: v.unscale(n) })
    }

    /// Computational basis state `|i>` (0-based).
    pub fn basis(d: usize, i: usize) -> Self {
        let mut amps = DVector::zeros(d);
        amps[i] = C64::new(1.0, 0.0);
        Self { amps }
    }

    /// `(1/sqrt(d)) sum_i |i>`.
    pub fn maximally_coherent(d: usize) -> Self {
        Self {
            amps: DVector::from_element(d, C64::new(1.0 / (d as f64).sqrt(), 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(&self.amps * self.amps.adjoint())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.dotc(&other.amps)
    }
}

/// Max of `|m_ij - conj(m_ji)|` over all pairs, diagonal included.
pub fn max_asymmetry(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitize(m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Hermitian eigensolver on an already Hermitian matrix.
pub(crate) fn hermitian_eigen(m: &DMatrix<C64>) -> Result<SymmetricEigen<C64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_SWEEPS).ok_or_else(|| {
        CoherenceError::NumericalFailure("Hermitian eigensolver did not converge".into())
    })
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm()
}
