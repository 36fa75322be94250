//! Numerical tolerances shared across the crate.

use serde::{Deserialize, Serialize};

/// Absolute max-norm residual accepted for `LᵀJL = J`.
pub const TOL_SYM: f64 = 1e-9;
/// Reconstruction residual for decompositions.
pub const TOL_RECON: f64 = 1e-8;
/// Lower bound (negated) for the smallest eigenvalue of `2S - iJ`.
pub const TOL_PSD: f64 = 1e-9;
/// Distance of a symplectic eigenvalue from 1/2 below which a mode is pure.
pub const TOL_PURE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub sym: f64,
    pub recon: f64,
    pub psd: f64,
    pub pure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sym: TOL_SYM,
            recon: TOL_RECON,
            psd: TOL_PSD,
            pure: TOL_PURE,
        }
    }
}

impl Tolerances {
    /// Every tolerance set to the same value.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            sym: tol,
            recon: tol,
            psd: tol,
            pure: tol,
        }
    }
}
