//! Triangle-like bounds on `C_l1` of a mixture `rho = sum_k p_k rho_k`.
//!
//! For each member `k` the complementary mixture `sigma_k = (rho - p_k rho_k) /
//! (1 - p_k)` gives `G_k = (1 - p_k) C_l1(sigma_k)` and `A_k = |G_k - p_k
//! C_l1(rho_k)|`. Splitting `rho` as `(1 - p_k) sigma_k + p_k rho_k` and applying
//! the two-state bounds yields
//!
//! ```text
//! sum A_k^2 / sum A_k  <=  C_l1(rho)  <=  (1/n) sum_k (G_k + p_k C_l1(rho_k))
//! ```
//!
//! and both sides improve on the older `(1/n) sum A_k` / `sum p_k C_l1(rho_k)`.

use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, QuantumState};
use crate::error::{CoherenceError, Result};
use crate::matrix::DensityMatrix;
use crate::measures::c_l1;
use crate::tolerance::Tolerances;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GValues {
    /// `G_k = (1 - p_k) C_l1(sigma_k)`.
    pub g: Vec<f64>,
    /// `A_k = |G_k - p_k C_l1(rho_k)|`.
    pub a: Vec<f64>,
    /// `C_l1(rho_k)` of each member.
    pub member_c_l1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleBounds {
    /// `max_k A_k`, the best two-part split lower bound.
    pub lower_lemma1: f64,
    /// `sum A^2 / sum A`, or 0 when every `A_k` vanishes.
    pub lower_thm1: f64,
    /// Set when every `A_k` is zero and `lower_thm1` falls back to 0.
    pub lower_thm1_degenerate: bool,
    pub upper_thm1: f64,
    /// `sum p_k C_l1(rho_k)`.
    pub upper_convexity: f64,
    pub c_l1_actual: f64,
}

/// Both sides of the two dominance inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Sides {
    /// `(1/n) sum A_k`.
    pub mean_a: f64,
    /// `sum A^2 / sum A` (0 when the sum vanishes).
    pub ratio_a: f64,
    pub upper_thm1: f64,
    pub upper_convexity: f64,
}

impl Theorem2Sides {
    pub fn lower_holds(&self, slack: f64) -> bool {
        self.mean_a <= self.ratio_a + slack
    }

    pub fn upper_holds(&self, slack: f64) -> bool {
        self.upper_thm1 <= self.upper_convexity + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Check {
    pub ratio: f64,
    pub mean: f64,
    pub holds: bool,
}

/// `sum a^2 / sum a`, `None` when `sum a == 0`.
fn ratio_of_squares(a: &[f64]) -> Option<f64> {
    let s: f64 = a.iter().sum();
    if s > 0.0 {
        Some(a.iter().map(|x| x * x).sum::<f64>() / s)
    } else {
        None
    }
}

/// Checks `b >= sum a^2 / sum a >= (1/n) sum a` for nonnegative `a`.
pub fn lemma3_check(a: &[f64], b: f64) -> Result<Lemma3Check> {
    if a.is_empty() {
        return Err(CoherenceError::InvalidInput("empty sequence".into()));
    }
    if a.iter().any(|x| !x.is_finite() || *x < 0.0) || !b.is_finite() {
        return Err(CoherenceError::InvalidInput(
            "entries must be finite and nonnegative".into(),
        ));
    }
    let ratio = ratio_of_squares(a).ok_or(CoherenceError::AllZeros)?;
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    let holds = b >= ratio - 1e-12 && ratio >= mean - 1e-12;
    Ok(Lemma3Check { ratio, mean, holds })
}

/// The complementary mixture `sum_{i != k} p_i rho_i / (1 - p_k)`, validated.
pub(crate) fn complement<S: QuantumState>(
    ens: &Ensemble<S>,
    k: usize,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    let pk = ens.weights()[k];
    let m = ens.partial_sum(|i| i != k) * C64::new(1.0 / (1.0 - pk), 0.0);
    DensityMatrix::from_matrix(m, tol).map_err(|e| CoherenceError::BadDecomposition {
        index: k,
        source: Box::new(e),
    })
}

/// Rejects ensembles with fewer than two members or a member carrying all the weight.
pub(crate) fn check_splittable<S: QuantumState>(ens: &Ensemble<S>, tol: &Tolerances) -> Result<()> {
    if ens.len() < 2 {
        return Err(CoherenceError::TooFewMembers {
            min: 2,
            found: ens.len(),
        });
    }
    if let Some((index, &weight)) = ens
        .weights()
        .iter()
        .enumerate()
        .find(|(_, &p)| p >= 1.0 - tol.weight)
    {
        return Err(CoherenceError::DegenerateWeight { index, weight });
    }
    Ok(())
}

pub fn g_values<S: QuantumState>(ens: &Ensemble<S>, tol: &Tolerances) -> Result<GValues> {
    check_splittable(ens, tol)?;
    let member_c_l1: Vec<f64> = ens.members().iter().map(|m| m.c_l1()).collect();
    let mut g = Vec::with_capacity(ens.len());
    let mut a = Vec::with_capacity(ens.len());
    for (k, &pk) in ens.weights().iter().enumerate() {
        let sigma = complement(ens, k, tol)?;
        let gk = (1.0 - pk) * c_l1(&sigma).value;
        a.push((gk - pk * member_c_l1[k]).abs());
        g.push(gk);
    }
    Ok(GValues { g, a, member_c_l1 })
}

fn upper_thm1(ens_weights: &[f64], gv: &GValues) -> f64 {
    let n = gv.g.len() as f64;
    gv.g
        .iter()
        .zip(ens_weights)
        .zip(&gv.member_c_l1)
        .map(|((g, p), c)| g + p * c)
        .sum::<f64>()
        / n
}

pub fn theorem1_bounds<S: QuantumState>(ens: &Ensemble<S>, tol: &Tolerances) -> Result<TriangleBounds> {
    let gv = g_values(ens, tol)?;
    let ratio = ratio_of_squares(&gv.a);
    Ok(TriangleBounds {
        lower_lemma1: gv.a.iter().cloned().fold(0.0, f64::max),
        lower_thm1: ratio.unwrap_or(0.0),
        lower_thm1_degenerate: ratio.is_none(),
        upper_thm1: upper_thm1(ens.weights(), &gv),
        upper_convexity: ens.average_c_l1(),
        c_l1_actual: c_l1(&ens.mixture()).value,
    })
}

pub fn theorem2_dominance<S: QuantumState>(ens: &Ensemble<S>, tol: &Tolerances) -> Result<Theorem2Sides> {
    let gv = g_values(ens, tol)?;
    Ok(Theorem2Sides {
        mean_a: gv.a.iter().sum::<f64>() / gv.a.len() as f64,
        ratio_a: ratio_of_squares(&gv.a).unwrap_or(0.0),
        upper_thm1: upper_thm1(ens.weights(), &gv),
        upper_convexity: ens.average_c_l1(),
    })
}
