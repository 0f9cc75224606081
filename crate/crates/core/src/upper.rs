//! Upper bounds on `C_l1` that only look at the state's own structure.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{CoherenceError, Result};
use crate::matrix::DensityMatrix;
use crate::measures::c_l1;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    ZeroDiag,
    Spectral,
    Subdiag,
    Dim,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroDiagBound {
    pub bound: f64,
    /// Number of diagonal entries at or below `tol.diag_zero`.
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubdiagBound {
    pub bound: f64,
    /// 1-based `k` in `2..=d` whose `k`-th lower diagonal is not identically zero.
    pub s_rho: BTreeSet<usize>,
    pub t: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralBound {
    pub bound: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundReport {
    pub dim_bound: f64,
    pub zero_diag_bound: Option<f64>,
    pub r_zero: usize,
    pub subdiag_bound: f64,
    pub s_rho: BTreeSet<usize>,
    pub t_count: usize,
    /// `None` when no off-diagonal entry vanishes.
    pub eig_bound: Option<f64>,
    /// `sum lambda_k^2 - sum rho_kk^2`.
    pub mu: f64,
    pub c_l1_actual: f64,
    pub tightest: BoundKind,
    pub tightest_value: f64,
}

impl UpperBoundReport {
    /// Every bound that applies, in tie-break order: on equal values the
    /// earlier entry is reported as tightest.
    pub fn applicable(&self) -> Vec<(BoundKind, f64)> {
        let mut out = vec![
            (BoundKind::Dim, self.dim_bound),
            (BoundKind::Subdiag, self.subdiag_bound),
        ];
        if let Some(b) = self.eig_bound {
            out.push((BoundKind::Spectral, b));
        }
        if let Some(b) = self.zero_diag_bound {
            out.push((BoundKind::ZeroDiag, b));
        }
        out
    }
}

/// `d - 1`.
pub fn bound_dim(rho: &DensityMatrix) -> f64 {
    (rho.dim() - 1) as f64
}

/// `d - r - 1` where `r` counts vanishing diagonal entries.
///
/// A positive semidefinite matrix with `rho_kk = 0` has its whole row and
/// column `k` equal to zero; a line carrying off-diagonal mass above
/// `sqrt(tol.diag_zero)` means the input is corrupted and is reported as
/// [`CoherenceError::ZeroRowViolation`].
pub fn bound_zero_diag(rho: &DensityMatrix, tol: &Tolerances) -> Result<ZeroDiagBound> {
    let d = rho.dim();
    let zeros = zero_diagonal_indices(rho, tol);
    let limit = tol.diag_zero.sqrt();
    for &k in &zeros {
        let modulus = rho.max_offdiag_in_line(k);
        if modulus > limit {
            return Err(CoherenceError::ZeroRowViolation { index: k, modulus });
        }
    }
    let r = zeros.len();
    if r >= d {
        return Err(CoherenceError::NotApplicable(
            "every diagonal entry vanishes".into(),
        ));
    }
    Ok(ZeroDiagBound {
        bound: (d - r - 1) as f64,
        r,
    })
}

/// 0-based indices `k` with `rho_kk <= tol.diag_zero`.
pub fn zero_diagonal_indices(rho: &DensityMatrix, tol: &Tolerances) -> Vec<usize> {
    rho.diagonal()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x <= tol.diag_zero)
        .map(|(k, _)| k)
        .collect()
}

/// `2t`, `t` being the number of lower diagonals that are not identically zero.
pub fn bound_subdiag(rho: &DensityMatrix, tol: &Tolerances) -> SubdiagBound {
    let d = rho.dim();
    let s_rho: BTreeSet<usize> = (2..=d)
        .filter(|&k| {
            rho.subdiagonal(k)
                .map(|v| v.iter().any(|z| z.norm() > tol.diag_zero))
                .unwrap_or(false)
        })
        .collect();
    let t = s_rho.len();
    SubdiagBound {
        bound: 2.0 * t as f64,
        s_rho,
        t,
    }
}

/// `sum lambda_k^2 - sum rho_kk^2`, clamped at zero against roundoff.
pub fn mu(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let s = rho.spectrum(tol)?;
    let purity: f64 = s.eigenvalues.iter().map(|l| l * l).sum();
    let diag: f64 = rho.diagonal().iter().map(|x| x * x).sum();
    let mu = purity - diag;
    Ok(if mu < 0.0 && mu > -1e-12 { 0.0 } else { mu })
}

/// `sqrt([d(d-1) - 1] mu)`, valid when some off-diagonal entry vanishes.
pub fn bound_spectral(rho: &DensityMatrix, tol: &Tolerances) -> Result<SpectralBound> {
    let d = rho.dim();
    let has_zero = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .any(|(i, j)| i != j && rho.entry(i, j).norm() <= tol.diag_zero);
    if !has_zero {
        return Err(CoherenceError::NotApplicable(
            "no vanishing off-diagonal entry".into(),
        ));
    }
    let mu = mu(rho, tol)?;
    let bound = (((d * (d - 1)) as f64 - 1.0) * mu.max(0.0)).sqrt();
    if bound > (d - 1) as f64 + 1e-8 {
        return Err(CoherenceError::NumericalFailure(format!(
            "spectral bound {bound} exceeds d - 1 (mu = {mu})"
        )));
    }
    Ok(SpectralBound { bound, mu })
}

pub fn bound_report(rho: &DensityMatrix, tol: &Tolerances) -> Result<UpperBoundReport> {
    let zero = match bound_zero_diag(rho, tol) {
        Ok(z) => Some(z),
        Err(CoherenceError::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    let spectral = match bound_spectral(rho, tol) {
        Ok(s) => Some(s),
        Err(CoherenceError::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    let sub = bound_subdiag(rho, tol);
    let mu = match spectral {
        Some(s) => s.mu,
        None => mu(rho, tol)?,
    };
    let mut report = UpperBoundReport {
        dim_bound: bound_dim(rho),
        zero_diag_bound: zero.map(|z| z.bound),
        r_zero: zero.map(|z| z.r).unwrap_or_else(|| zero_diagonal_indices(rho, tol).len()),
        subdiag_bound: sub.bound,
        s_rho: sub.s_rho,
        t_count: sub.t,
        eig_bound: spectral.map(|s| s.bound),
        mu,
        c_l1_actual: c_l1(rho).value,
        tightest: BoundKind::Dim,
        tightest_value: bound_dim(rho),
    };
    // strict `<` keeps the earliest kind on ties
    let (kind, value) = report
        .applicable()
        .into_iter()
        .fold(None, |best: Option<(BoundKind, f64)>, (k, v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((k, v)),
        })
        .expect("dimension bound always applies");
    report.tightest = kind;
    report.tightest_value = value;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::PureState;
    use crate::C64;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn embedded_plus(d: usize) -> DensityMatrix {
        let mut m = DMatrix::zeros(d, d);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = C64::new(0.5, 0.0);
            }
        }
        DensityMatrix::from_matrix(m, &Tolerances::default()).unwrap()
    }

    #[test]
    fn zero_diag_examples() {
        let tol = Tolerances::default();
        let rho = embedded_plus(3);
        let z = bound_zero_diag(&rho, &tol).unwrap();
        assert_eq!((z.r, z.bound), (1, 1.0));
        assert_abs_diff_eq!(c_l1(&rho).value, 1.0, epsilon = 1e-15);

        let full = crate::random::random_state(3, 3, 4);
        let z = bound_zero_diag(&full, &tol).unwrap();
        assert_eq!((z.r, z.bound), (0, 2.0));
        assert_eq!(z.bound, bound_dim(&full));

        let basis = PureState::basis(4, 0).projector();
        let z = bound_zero_diag(&basis, &tol).unwrap();
        assert_eq!((z.r, z.bound), (3, 0.0));
    }

    #[test]
    fn zero_row_violation_detected() {
        // PSD within a loose tolerance but with mass on a zero-diagonal line
        let tol = Tolerances {
            psd: 1e-2,
            ..Tolerances::default()
        };
        let rows = vec![
            vec![C64::new(1.0, 0.0), C64::new(1e-3, 0.0)],
            vec![C64::new(1e-3, 0.0), C64::new(0.0, 0.0)],
        ];
        let rho = DensityMatrix::from_rows(&rows, &tol).unwrap();
        assert!(matches!(
            bound_zero_diag(&rho, &tol),
            Err(CoherenceError::ZeroRowViolation { index: 1, .. })
        ));
    }

    #[test]
    fn subdiag_examples() {
        let tol = Tolerances::default();
        let mut m = DMatrix::from_diagonal_element(4, 4, C64::new(0.25, 0.0));
        for i in 0..3 {
            m[(i, i + 1)] = C64::new(0.1, 0.0);
            m[(i + 1, i)] = C64::new(0.1, 0.0);
        }
        let tri = DensityMatrix::from_matrix(m, &tol).unwrap();
        let s = bound_subdiag(&tri, &tol);
        assert_eq!(s.s_rho.iter().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!((s.t, s.bound), (1, 2.0));

        let diag = DensityMatrix::diagonal_state(&[0.5, 0.25, 0.25], &tol).unwrap();
        let s = bound_subdiag(&diag, &tol);
        assert!(s.s_rho.is_empty());
        assert_eq!(s.bound, 0.0);

        let maxcoh = PureState::maximally_coherent(3).projector();
        let s = bound_subdiag(&maxcoh, &tol);
        assert_eq!(s.s_rho.iter().copied().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(s.bound, 4.0);
    }

    #[test]
    fn spectral_examples() {
        let tol = Tolerances::default();
        let s = bound_spectral(&embedded_plus(3), &tol).unwrap();
        assert_abs_diff_eq!(s.mu, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.bound, 2.5f64.sqrt(), epsilon = 1e-12);
        assert!(s.bound <= 2.0);

        let diag = DensityMatrix::diagonal_state(&[0.5, 0.25, 0.25], &tol).unwrap();
        let s = bound_spectral(&diag, &tol).unwrap();
        assert_abs_diff_eq!(s.mu, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.bound, 0.0, epsilon = 1e-6);

        let maxcoh = PureState::maximally_coherent(3).projector();
        assert!(matches!(
            bound_spectral(&maxcoh, &tol),
            Err(CoherenceError::NotApplicable(_))
        ));
    }

    #[test]
    fn reports() {
        let tol = Tolerances::default();
        let m4 = PureState::maximally_coherent(4).projector();
        let r = bound_report(&m4, &tol).unwrap();
        assert_eq!(r.dim_bound, 3.0);
        assert_abs_diff_eq!(r.c_l1_actual, 3.0, epsilon = 1e-12);
        // the zero-diagonal bound with r = 0 ties with d - 1
        assert_eq!(r.tightest_value, 3.0);
        assert_eq!(r.tightest, BoundKind::Dim);
        assert!(r.eig_bound.is_none());

        let diag = DensityMatrix::diagonal_state(&[0.1, 0.2, 0.3, 0.15, 0.25], &tol).unwrap();
        let r = bound_report(&diag, &tol).unwrap();
        assert_eq!(r.tightest_value, 0.0);
        assert_eq!(r.subdiag_bound, 0.0);
        assert_eq!(r.tightest, BoundKind::Subdiag);

        let emb = embedded_plus(4);
        let r = bound_report(&emb, &tol).unwrap();
        assert_eq!(r.r_zero, 2);
        assert_eq!(r.zero_diag_bound, Some(1.0));
        assert_eq!(r.tightest_value, 1.0);
        assert_eq!(r.tightest, BoundKind::ZeroDiag);
    }
}
