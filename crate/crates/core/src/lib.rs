//! Quantum coherence under the l1-norm and its convex-roof extension.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`]: validated density matrices, pure states and their spectra.
//! * [`ensemble`]: convex decompositions `rho = sum_i p_i rho_i`.
//! * [`measures`]: the l1-norm and relative entropy of coherence.
//! * [`triangle`]: decomposition-based lower/upper bounds for mixtures.
//! * [`roof`]: the convex-roof l1-norm, closed forms and a numerical estimator.
//! * [`upper`]: structural upper bounds read off the state itself.
//! * [`random`]: seeded state generators used by tests and the suite runner.
//!
//! Indices are 0-based in the API. Operations that mirror the usual 1-based
//! matrix notation (`rho_{st}`, subdiagonal `k`) say so in their docs.

pub mod ensemble;
pub mod error;
pub mod matrix;
pub mod measures;
pub mod random;
pub mod roof;
pub mod tolerance;
pub mod triangle;
pub mod upper;

pub use ensemble::{Ensemble, Member, QuantumState};
pub use error::{CoherenceError, Result};
pub use matrix::{DensityMatrix, PureState, Spectrum};
pub use measures::{CoherenceValue, Measure};
pub use roof::{OptimizerConfig, RoofBounds, RoofMethod, RoofResult};
pub use tolerance::Tolerances;
pub use triangle::{GValues, Theorem2Sides, TriangleBounds};
pub use upper::{BoundKind, UpperBoundReport};

/// Complex scalar used for every matrix entry and amplitude.
pub type C64 = num_complex::Complex64;
