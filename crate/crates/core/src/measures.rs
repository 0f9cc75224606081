//! The l1-norm and relative entropy of coherence.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::{DensityMatrix, PureState};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    L1,
    RelEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceValue {
    pub value: f64,
    pub measure: Measure,
}

/// `C_l1(rho) = sum_{i != j} |rho_ij|`.
pub fn c_l1(rho: &DensityMatrix) -> CoherenceValue {
    let m = rho.matrix();
    let d = rho.dim();
    let mut total = 0.0;
    for j in 0..d {
        for i in 0..d {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    CoherenceValue {
        value: total,
        measure: Measure::L1,
    }
}

/// `C_l1(|psi>) = (sum_i |psi_i|)^2 - 1`.
pub fn c_l1_pure(psi: &PureState) -> CoherenceValue {
    CoherenceValue {
        value: l1_of_amplitudes(psi.amps().iter().map(|z| z.norm())),
        measure: Measure::L1,
    }
}

/// `sum_{i != j} a_i a_j` for nonnegative moduli `a` with `sum a_i^2 = 1`, via
/// the squared sum. Clamped at zero against cancellation.
pub(crate) fn l1_of_amplitudes(moduli: impl Iterator<Item = f64>) -> f64 {
    let (s, sq) = moduli.fold((0.0, 0.0), |(s, sq), a| (s + a, sq + a * a));
    (s * s - sq).max(0.0)
}

/// The incoherent state obtained by deleting all off-diagonal entries.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let d = rho.dim();
    let m = rho.matrix();
    DensityMatrix::from_trusted(DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            m[(i, i)]
        } else {
            crate::C64::new(0.0, 0.0)
        }
    }))
}

/// Shannon entropy in bits with `0 log 0 = 0`; inputs below zero count as zero.
pub fn shannon_bits(p: impl Iterator<Item = f64>) -> f64 {
    p.filter(|&x| x > 0.0).map(|x| -x * x.log2()).sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let s = rho.spectrum(tol)?;
    Ok(shannon_bits(s.eigenvalues.into_iter()))
}

/// `C_re(rho) = S(rho_diag) - S(rho)` in bits.
pub fn c_rel_entropy(rho: &DensityMatrix, tol: &Tolerances) -> Result<CoherenceValue> {
    let s_diag = shannon_bits(rho.diagonal().into_iter());
    let s = von_neumann_entropy(rho, tol)?;
    let mut value = s_diag - s;
    if value < 0.0 && value > -1e-10 {
        value = 0.0;
    }
    Ok(CoherenceValue {
        value,
        measure: Measure::RelEntropy,
    })
}
