//! Convex decompositions `rho = sum_i p_i rho_i`.

use nalgebra::DMatrix;

use crate::error::{CoherenceError, Result};
use crate::matrix::{DensityMatrix, PureState};
use crate::measures;
use crate::tolerance::Tolerances;
use crate::C64;

/// Anything that can sit in an ensemble.
pub trait QuantumState: Clone {
    fn dim(&self) -> usize;
    fn density(&self) -> DensityMatrix;
    fn c_l1(&self) -> f64;
}

impl QuantumState for DensityMatrix {
    fn dim(&self) -> usize {
        DensityMatrix::dim(self)
    }
    fn density(&self) -> DensityMatrix {
        self.clone()
    }
    fn c_l1(&self) -> f64 {
        measures::c_l1(self).value
    }
}

impl QuantumState for PureState {
    fn dim(&self) -> usize {
        PureState::dim(self)
    }
    fn density(&self) -> DensityMatrix {
        self.projector()
    }
    fn c_l1(&self) -> f64 {
        measures::c_l1_pure(self).value
    }
}

/// A member read from a file: either a full density matrix or an amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    Mixed(DensityMatrix),
    Pure(PureState),
}

impl QuantumState for Member {
    fn dim(&self) -> usize {
        match self {
            Member::Mixed(m) => m.dim(),
            Member::Pure(p) => p.dim(),
        }
    }
    fn density(&self) -> DensityMatrix {
        match self {
            Member::Mixed(m) => m.clone(),
            Member::Pure(p) => p.projector(),
        }
    }
    fn c_l1(&self) -> f64 {
        match self {
            Member::Mixed(m) => m.c_l1(),
            Member::Pure(p) => p.c_l1(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<S> {
    weights: Vec<f64>,
    members: Vec<S>,
}

impl<S: QuantumState> Ensemble<S> {
    /// Validates weights (nonnegative, summing to one within `tol.weight`) and
    /// member dimensions. Weights are renormalized to sum to one exactly.
    pub fn new(weights: Vec<f64>, members: Vec<S>, tol: &Tolerances) -> Result<Self> {
        if members.is_empty() {
            return Err(CoherenceError::TooFewMembers { min: 1, found: 0 });
        }
        if weights.len() != members.len() {
            return Err(CoherenceError::BadWeights(format!(
                "{} weights for {} members",
                weights.len(),
                members.len()
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(CoherenceError::BadWeights(format!("weight {i} is {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol.weight {
            return Err(CoherenceError::BadWeights(format!("weights sum to {total}")));
        }
        let d = members[0].dim();
        if let Some(m) = members.iter().find(|m| m.dim() != d) {
            return Err(CoherenceError::DimensionMismatch {
                expected: d,
                found: m.dim(),
            });
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { weights, members })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[S] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.weights.iter().copied().zip(self.members.iter())
    }

    /// Unnormalized `sum_{i in idx} p_i rho_i`.
    pub(crate) fn partial_sum(&self, keep: impl Fn(usize) -> bool) -> DMatrix<C64> {
        let d = self.dim();
        let mut acc = DMatrix::zeros(d, d);
        for (i, (p, s)) in self.iter().enumerate() {
            if keep(i) {
                acc += s.density().matrix() * C64::new(p, 0.0);
            }
        }
        acc
    }

    /// The mixed state `sum_i p_i rho_i`.
    pub fn mixture(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(self.partial_sum(|_| true))
    }

    /// `sum_i p_i C_l1(rho_i)`.
    pub fn average_c_l1(&self) -> f64 {
        self.iter().map(|(p, s)| p * s.c_l1()).sum()
    }

    /// The ensemble with every member mapped through `f`.
    pub fn map<T: QuantumState>(&self, f: impl Fn(&S) -> T) -> Ensemble<T> {
        Ensemble {
            weights: self.weights.clone(),
            members: self.members.iter().map(f).collect(),
        }
    }
}

impl Ensemble<Member> {
    /// All members as pure states, if every member is one.
    pub fn as_pure(&self) -> Option<Ensemble<PureState>> {
        let members = self
            .members
            .iter()
            .map(|m| match m {
                Member::Pure(p) => Some(p.clone()),
                Member::Mixed(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Ensemble {
            weights: self.weights.clone(),
            members,
        })
    }
}
