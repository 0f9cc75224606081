use serde::{Deserialize, Serialize};

/// Numerical tolerances used by validation and by every zero test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max allowed `|rho_ij - conj(rho_ji)|` before hermitization.
    pub herm: f64,
    /// Max allowed `|tr rho - 1|`.
    pub trace: f64,
    /// Eigenvalues down to `-psd` are accepted (and clamped to zero).
    pub psd: f64,
    /// Spectral reconstruction / orthonormality tolerance.
    pub eig: f64,
    /// Max allowed deviation of a pure state's squared norm from 1.
    pub norm: f64,
    /// Max allowed deviation of ensemble weights' sum from 1.
    pub weight: f64,
    /// Entries with modulus at or below this are treated as zero.
    pub diag_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            trace: 1e-8,
            psd: 1e-9,
            eig: 1e-8,
            norm: 1e-10,
            weight: 1e-10,
            diag_zero: 1e-10,
        }
    }
}
