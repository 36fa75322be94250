//! Gaussian symmetries `λ W(α) Γ(L)` as data, with composition, inversion
//! and their action on Gaussian states.
//!
//! Only the Weyl cocycle `e^{−i Im⟨α|β⟩}` is tracked in the phase; the
//! projective ambiguity of `Γ(L₁)Γ(L₂)` against `Γ(L₁L₂)` is normalized to 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{symmetrize, RVec};
use crate::state::GaussianState;
use crate::symplectic::SymplecticMatrix;

const PHASE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSymmetry {
    phase: Complex64,
    alpha: Vec<Complex64>,
    l: SymplecticMatrix,
}

impl GaussianSymmetry {
    pub fn new(phase: Complex64, alpha: Vec<Complex64>, l: SymplecticMatrix) -> Result<Self> {
        let modulus = phase.norm();
        if (modulus - 1.0).abs() > PHASE_TOL {
            return Err(Error::NonUnitPhase { modulus });
        }
        if alpha.len() != l.n() {
            return Err(Error::DimensionMismatch {
                expected: l.n(),
                found: alpha.len(),
            });
        }
        Ok(GaussianSymmetry { phase, alpha, l })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(GaussianSymmetry {
            phase: Complex64::new(1.0, 0.0),
            alpha: vec![Complex64::new(0.0, 0.0); n],
            l: SymplecticMatrix::identity(n)?,
        })
    }

    /// The pure displacement `W(α)`.
    pub fn weyl(alpha: Vec<Complex64>) -> Result<Self> {
        let l = SymplecticMatrix::identity(alpha.len())?;
        Ok(GaussianSymmetry {
            phase: Complex64::new(1.0, 0.0),
            alpha,
            l,
        })
    }

    /// `Γ(L)`
    pub fn bogoliubov(l: SymplecticMatrix) -> Self {
        GaussianSymmetry {
            phase: Complex64::new(1.0, 0.0),
            alpha: vec![Complex64::new(0.0, 0.0); l.n()],
            l,
        }
    }

    pub fn n(&self) -> usize {
        self.l.n()
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn l(&self) -> &SymplecticMatrix {
        &self.l
    }
}

/// `Σ Im(ᾱ_j β_j)`
pub fn im_inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).im).sum()
}

fn to_real(alpha: &[Complex64]) -> RVec {
    RVec::from_iterator(
        2 * alpha.len(),
        alpha.iter().map(|a| a.re).chain(alpha.iter().map(|a| a.im)),
    )
}

fn from_real(v: &RVec) -> Vec<Complex64> {
    let n = v.len() / 2;
    (0..n).map(|j| Complex64::new(v[j], v[n + j])).collect()
}

/// `L̃α`, defined by `(Re L̃α; Im L̃α) = L (Re α; Im α)`.
pub fn tilde_action(l: &SymplecticMatrix, alpha: &[Complex64]) -> Result<Vec<Complex64>> {
    if alpha.len() != l.n() {
        return Err(Error::DimensionMismatch {
            expected: l.n(),
            found: alpha.len(),
        });
    }
    Ok(from_real(&(l.matrix() * to_real(alpha))))
}

fn same_modes(a: &GaussianSymmetry, b: usize) -> Result<()> {
    if a.n() != b {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b,
        });
    }
    Ok(())
}

/// `g₁g₂ = (λ₁λ₂ e^{−i Im⟨α₁|L̃₁α₂⟩}, α₁ + L̃₁α₂, L₁L₂)`
pub fn compose(g1: &GaussianSymmetry, g2: &GaussianSymmetry) -> Result<GaussianSymmetry> {
    same_modes(g1, g2.n())?;
    let moved = tilde_action(&g1.l, &g2.alpha)?;
    let cocycle = Complex64::from_polar(1.0, -im_inner(&g1.alpha, &moved));
    Ok(GaussianSymmetry {
        phase: g1.phase * g2.phase * cocycle,
        alpha: g1.alpha.iter().zip(&moved).map(|(a, b)| a + b).collect(),
        l: g1.l.mul(&g2.l),
    })
}

/// `(λ̄, −L̃⁻¹α, L⁻¹)`; the cocycle of `g g⁻¹` is exactly 1.
pub fn inverse(g: &GaussianSymmetry) -> GaussianSymmetry {
    let l_inv = g.l.inverse();
    let back = from_real(&(l_inv.matrix() * to_real(&g.alpha)));
    GaussianSymmetry {
        phase: g.phase.conj(),
        alpha: back.into_iter().map(|a| -a).collect(),
        l: l_inv,
    }
}

/// The Gaussian state of `UρU†` for `U = λW(α)Γ(L)`.
pub fn act_on_state(g: &GaussianSymmetry, state: &GaussianState) -> Result<GaussianState> {
    let n = state.n();
    same_modes(g, n)?;
    let l_inv = g.l.inverse();
    let li = l_inv.matrix();
    let s = symmetrize(&(li.transpose() * state.s() * li));
    let lm = RVec::from_iterator(2 * n, state.l().iter().copied().chain(state.m().iter().map(|x| -x)));
    let moved = li.transpose() * lm;
    let r2 = std::f64::consts::SQRT_2;
    let l = RVec::from_fn(n, |j, _| moved[j] + r2 * g.alpha[j].im);
    let m = RVec::from_fn(n, |j, _| -moved[n + j] + r2 * g.alpha[j].re);
    Ok(GaussianState::from_parts(l, m, s))
}
