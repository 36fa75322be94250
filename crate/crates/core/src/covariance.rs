//! Geometry of the convex set `K_n` of Gaussian covariance matrices:
//! membership through the uncertainty relation `2S − iJ ⪰ 0`, extremality,
//! and the decomposition of every member as `¼(LᵀL + MᵀM)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    asymmetry, det, diag_pq, herm_eigenvalues_desc, max_abs, min_sym_eigenvalue,
    phase_space_modes, symmetrize, to_complex, RMat, I,
};
use crate::symplectic::{omega, SymplecticMatrix};
use crate::tol::Tolerances;
use crate::williamson::{symplectic_spectrum, williamson_decompose};

/// Outcome of [`kn_membership`]. Both the defining Hermitian test and the
/// symplectic-spectrum test are carried so their agreement can be audited.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    pub extreme: bool,
    /// Smallest eigenvalue of the Hermitian matrix `2S − iJ`.
    pub min_eig_complex: f64,
    /// Symplectic spectrum, present when `S` is strictly positive definite.
    #[serde(rename = "d")]
    pub sympl_spectrum: Option<Vec<f64>>,
    /// `min d_j >= 1/2` (within tolerance), when the spectrum exists.
    pub spectrum_test: Option<bool>,
    pub tests_agree: bool,
    pub det_value: f64,
    /// `4^{-n}`
    pub det_bound: f64,
    pub asymmetry: f64,
}

fn strictly_pd(s: &RMat) -> bool {
    min_sym_eigenvalue(s) > 1e-12 * max_abs(s).max(1.0)
}

pub fn kn_membership(s: &RMat, tol: &Tolerances) -> Result<MembershipReport> {
    let n = phase_space_modes(s)?;
    let asym = asymmetry(s);
    if asym > tol.psd {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let s = symmetrize(s);
    let h = to_complex(&(&s * 2.0)) - to_complex(&omega(n)) * I;
    let h = (&h + h.adjoint()) * num_complex::Complex64::new(0.5, 0.0);
    let min_eig_complex = *herm_eigenvalues_desc(&h)
        .as_slice()
        .last()
        .expect("non-empty spectrum");
    let member = min_eig_complex >= -tol.psd;

    let sympl_spectrum = if strictly_pd(&s) {
        Some(symplectic_spectrum(&s, tol.psd)?)
    } else {
        None
    };
    let spectrum_test = sympl_spectrum.as_ref().map(|d| {
        let min_d = d.iter().copied().fold(f64::INFINITY, f64::min);
        min_d >= 0.5 - tol.psd
    });
    let tests_agree = spectrum_test.is_none_or(|t| t == member);
    let extreme = member
        && sympl_spectrum
            .as_ref()
            .is_some_and(|d| d.iter().all(|x| (x - 0.5).abs() <= tol.pure));

    Ok(MembershipReport {
        member,
        extreme,
        min_eig_complex,
        sympl_spectrum,
        spectrum_test,
        tests_agree,
        det_value: det(&s),
        det_bound: 0.25_f64.powi(n as i32),
        asymmetry: asym,
    })
}

/// Splits a diagonal `D >= I` as `D = ½(D₁ + D₂) = ½(D₁⁻¹ + D₂⁻¹)`.
///
/// Per entry, `X = 1 + 2(D² − 1) + 2D(D² − 1)^{1/2}` is the larger root of
/// `X² + (2 − 4D²)X + 1 = 0`, and `D₁ = 2D/(1 + X)`, `D₂ = D₁X`. Entries in
/// `[1 − tol, 1)` are clamped to 1, as are entries within a few ulps above 1.
pub fn split_diagonal(d: &[f64], tol: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut d1 = Vec::with_capacity(d.len());
    let mut d2 = Vec::with_capacity(d.len());
    for (index, &value) in d.iter().enumerate() {
        if !(value >= 1.0 - tol) || !value.is_finite() {
            return Err(Error::DiagonalBelowOne { index, value });
        }
        // the split has a square-root branch point at 1, so rounding noise
        // there would otherwise surface as ~1e-8 squeezing
        let v = if value - 1.0 <= 16.0 * f64::EPSILON { 1.0 } else { value };
        let excess = (v - 1.0) * (v + 1.0);
        let x = 1.0 + 2.0 * excess + 2.0 * v * excess.sqrt();
        let a = 2.0 * v / (1.0 + x);
        d1.push(a);
        d2.push(a * x);
    }
    Ok((d1, d2))
}

/// `S = ¼(LᵀL + MᵀM)` with `L`, `M` symplectic.
#[derive(Debug, Clone)]
pub struct ExtremeDecomposition {
    pub l: SymplecticMatrix,
    pub m: SymplecticMatrix,
    /// `‖¼(LᵀL + MᵀM) − S‖_max`
    pub residual: f64,
}

impl ExtremeDecomposition {
    pub fn reconstruct(&self) -> RMat {
        let l = self.l.matrix();
        let m = self.m.matrix();
        (l.transpose() * l + m.transpose() * m) * 0.25
    }
}

pub fn extreme_decompose(s: &RMat, tol: &Tolerances) -> Result<ExtremeDecomposition> {
    let report = kn_membership(s, tol)?;
    if !report.member {
        return Err(Error::NotInKn(Box::new(report)));
    }
    let s = symmetrize(s);
    let w = williamson_decompose(&s, tol.psd)?;
    let doubled: Vec<f64> = w.d.iter().map(|x| 2.0 * x).collect();
    let (d1, d2) = split_diagonal(&doubled, 2.0 * tol.pure)?;

    let squeeze = |dk: &[f64]| {
        let up: Vec<f64> = dk.iter().map(|x| x.sqrt()).collect();
        let down: Vec<f64> = dk.iter().map(|x| 1.0 / x.sqrt()).collect();
        diag_pq(&up, &down)
    };
    let n_mat = w.m.matrix();
    let l = squeeze(&d1) * n_mat;
    let m = squeeze(&d2) * n_mat;
    let recon = (l.transpose() * &l + m.transpose() * &m) * 0.25;
    let residual = max_abs(&(recon - &s));
    Ok(ExtremeDecomposition {
        l: SymplecticMatrix::new_unchecked(l),
        m: SymplecticMatrix::new_unchecked(m),
        residual,
    })
}

/// Extremality verdict with a witness `L` satisfying `S = ½LᵀL` when extreme.
#[derive(Debug, Clone)]
pub struct ExtremeCheck {
    pub extreme: bool,
    pub d: Vec<f64>,
    pub witness: Option<SymplecticMatrix>,
}

pub fn is_extreme(s: &RMat, tol: &Tolerances) -> Result<ExtremeCheck> {
    let report = kn_membership(s, tol)?;
    if !report.member {
        return Err(Error::NotInKn(Box::new(report)));
    }
    let s = symmetrize(s);
    let w = williamson_decompose(&s, tol.psd)?;
    let extreme = w.d.iter().all(|x| (x - 0.5).abs() <= tol.pure);
    let witness = if extreme {
        // 2S = Mᵀ diag(2d, 2d) M with 2d = 1
        Some(w.m.clone())
    } else {
        None
    };
    Ok(ExtremeCheck {
        extreme,
        d: w.d,
        witness,
    })
}
