//! Numeric tolerances and resource caps.
//!
//! Every comparison against an exact quantity goes through one of these
//! fields so a caller can tighten or relax them in one place.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Trace / probability-normalization tolerance.
    pub trace: f64,
    /// Completeness tolerance for measurements and channels.
    pub sum: f64,
    /// Hermiticity tolerance.
    pub herm: f64,
    /// Positive-semidefiniteness tolerance (eigenvalues ≥ -psd).
    pub psd: f64,
    /// Pauli decompose/reconstruct round-trip tolerance.
    pub recon: f64,
    /// Cap on qubit count for dense matrices.
    pub max_qubits: usize,
    /// Exhaustive-enumeration budget in elementary evaluations.
    pub enumeration_budget: u128,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            trace: 1e-9,
            sum: 1e-9,
            herm: 1e-9,
            psd: 1e-9,
            recon: 1e-8,
            max_qubits: 10,
            enumeration_budget: 100_000_000,
        }
    }
}

impl Tolerances {
    pub fn check_qubits(&self, requested: usize) -> crate::error::Result<()> {
        if requested > self.max_qubits {
            return Err(crate::error::Error::QubitCapExceeded {
                requested,
                cap: self.max_qubits,
            });
        }
        Ok(())
    }
}
