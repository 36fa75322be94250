//! Gaussian purification on `2n` modes and covariance marginals.

use num_complex::Complex64;

use crate::covariance::extreme_decompose;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, symmetrize, RMat, RVec};
use crate::state::GaussianState;
use crate::symmetry::GaussianSymmetry;
use crate::symplectic::SymplecticMatrix;
use crate::tol::Tolerances;

/// `u ⊕ v ↦ (u+v)/√2 ⊕ (u−v)/√2` on `ℂⁿ ⊕ ℂⁿ`, as a real `4n × 4n` matrix.
/// Orthogonal, symplectic and an involution.
pub fn beamsplitter_symplectic(n: usize) -> Result<SymplecticMatrix> {
    if n == 0 {
        return Err(Error::InvalidModeCount(0));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut b = RMat::zeros(4 * n, 4 * n);
    for block in [0, 2 * n] {
        for j in 0..n {
            let (u, v) = (block + j, block + n + j);
            b[(u, u)] = r;
            b[(u, v)] = r;
            b[(v, u)] = r;
            b[(v, v)] = -r;
        }
    }
    Ok(SymplecticMatrix::new_unchecked(b))
}

/// Places `a` (modes `0..n`) and `b` (modes `n..2n`) into a `4n × 4n`
/// phase-space matrix in `(p¹, p², q¹, q²)` order.
fn direct_sum(a: &RMat, b: &RMat) -> RMat {
    let n = a.nrows() / 2;
    let first: Vec<usize> = (0..n).chain(2 * n..3 * n).collect();
    let second: Vec<usize> = (n..2 * n).chain(3 * n..4 * n).collect();
    let mut out = RMat::zeros(4 * n, 4 * n);
    for (src, idx) in [(a, &first), (b, &second)] {
        for (i, &gi) in idx.iter().enumerate() {
            for (j, &gj) in idx.iter().enumerate() {
                out[(gi, gj)] = src[(i, j)];
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct PurificationResult {
    pub pure_state: GaussianState,
    pub factor_l1: SymplecticMatrix,
    pub factor_l2: SymplecticMatrix,
    /// `W((α, 0)) Γ(B₀) Γ(L₁⁻¹ ⊕ L₂⁻¹)`; applied to the `2n`-mode vacuum it
    /// yields `pure_state`.
    pub symmetry: GaussianSymmetry,
    /// Max-norm deviation of the first-`n`-mode marginal from the input.
    pub residual: f64,
}

pub fn purify(state: &GaussianState, tol: &Tolerances) -> Result<PurificationResult> {
    let n = state.n();
    let e = extreme_decompose(state.s(), tol)?;
    let (l1, l2) = (e.l, e.m);

    let half = |l: &SymplecticMatrix| l.matrix().transpose() * l.matrix() * 0.5;
    let b0 = beamsplitter_symplectic(n)?;
    let b = b0.matrix();
    let s = symmetrize(&(b * direct_sum(&half(&l1), &half(&l2)) * b));

    let mut l = RVec::zeros(2 * n);
    let mut m = RVec::zeros(2 * n);
    l.rows_mut(0, n).copy_from(state.l());
    m.rows_mut(0, n).copy_from(state.m());
    let pure_state = GaussianState::from_parts(l, m, s);

    let mut alpha = state.weyl_alpha();
    alpha.resize(2 * n, Complex64::new(0.0, 0.0));
    let inv_sum = direct_sum(l1.inverse().matrix(), l2.inverse().matrix());
    let symmetry = GaussianSymmetry::new(
        Complex64::new(1.0, 0.0),
        alpha,
        SymplecticMatrix::new_unchecked(b * inv_sum),
    )?;

    let back = marginal(&pure_state, &(0..n).collect::<Vec<_>>())?;
    let residual = max_abs(&(back.s() - state.s()))
        .max((back.l() - state.l()).amax())
        .max((back.m() - state.m()).amax());
    Ok(PurificationResult {
        pure_state,
        factor_l1: l1,
        factor_l2: l2,
        symmetry,
        residual,
    })
}

/// Reduced state on the modes listed in `keep` (0-based, in the given order).
pub fn marginal(state: &GaussianState, keep: &[usize]) -> Result<GaussianState> {
    let n = state.n();
    if keep.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut seen = vec![false; n];
    for &k in keep {
        if k >= n {
            return Err(Error::ModeOutOfRange { index: k, modes: n });
        }
        if seen[k] {
            return Err(Error::DuplicateMode(k));
        }
        seen[k] = true;
    }
    let idx: Vec<usize> = keep.iter().copied().chain(keep.iter().map(|k| n + k)).collect();
    let s = state.s().select_rows(&idx).select_columns(&idx);
    let l = RVec::from_iterator(keep.len(), keep.iter().map(|&k| state.l()[k]));
    let m = RVec::from_iterator(keep.len(), keep.iter().map(|&k| state.m()[k]));
    Ok(GaussianState::from_parts(l, m, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::kn_membership;
    use crate::linalg::diag_pq;
    use crate::state::{chf, new_state};
    use crate::symmetry::act_on_state;
    use crate::symplectic::random_symplectic;
    use crate::williamson::symplectic_spectrum;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn beamsplitter_properties() {
        for n in 1..4 {
            let b = beamsplitter_symplectic(n).unwrap();
            let bb = b.matrix() * b.matrix();
            assert!(max_abs(&(bb - RMat::identity(4 * n, 4 * n))) <= 1e-15);
            assert!(b.residual() <= 1e-15);
        }
        // complex amplitude (1, 0) ↦ (1/√2, 1/√2)
        let b = beamsplitter_symplectic(1).unwrap();
        let out = b.matrix() * RVec::from_column_slice(&[1.0, 0.0, 0.0, 0.0]);
        assert_abs_diff_eq!(out[0], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-16);
        assert_abs_diff_eq!(out[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-16);
    }

    #[test]
    fn vacuum_purifies_to_vacuum() {
        let p = purify(&GaussianState::vacuum(2).unwrap(), &tol()).unwrap();
        assert!(max_abs(&(p.pure_state.s() - RMat::identity(8, 8) * 0.5)) <= 1e-14);
    }

    #[test]
    fn thermal_purification() {
        let t = GaussianState::thermal(&[1.0]).unwrap();
        let p = purify(&t, &tol()).unwrap();
        let d = symplectic_spectrum(p.pure_state.s(), 1e-9).unwrap();
        for x in d {
            assert_abs_diff_eq!(x, 0.5, epsilon = 1e-12);
        }
        assert!(p.residual <= 1e-14);
        // the other half carries the same thermal marginal
        let other = marginal(&p.pure_state, &[1]).unwrap();
        assert!(max_abs(&(other.s() - RMat::identity(2, 2))) <= 1e-12);
    }

    #[test]
    fn random_mixed_purification() {
        let l = random_symplectic(2, 21, 0.5).unwrap();
        let s = symmetrize(&(l.matrix().transpose() * diag_pq(&[1.4, 0.7], &[1.4, 0.7]) * l.matrix()));
        let st = new_state(&[0.2, -0.4], &[1.0, 0.5], &s, &tol()).unwrap();
        let p = purify(&st, &tol()).unwrap();
        assert!(p.residual <= 1e-10, "{}", p.residual);
        assert!(kn_membership(p.pure_state.s(), &tol()).unwrap().extreme);

        let via_action = act_on_state(&p.symmetry, &GaussianState::vacuum(4).unwrap()).unwrap();
        assert!(max_abs(&(via_action.s() - p.pure_state.s())) <= 1e-10);
        assert!((via_action.l() - p.pure_state.l()).amax() <= 1e-12);
        assert!((via_action.m() - p.pure_state.m()).amax() <= 1e-12);
    }

    #[test]
    fn marginal_rules() {
        let v = GaussianState::vacuum(3).unwrap();
        assert_eq!(marginal(&v, &[0, 1, 2]).unwrap(), v);
        assert_eq!(marginal(&v, &[0]).unwrap(), GaussianState::vacuum(1).unwrap());
        assert!(matches!(marginal(&v, &[]), Err(Error::EmptySubset)));
        assert!(matches!(marginal(&v, &[3]), Err(Error::ModeOutOfRange { index: 3, modes: 3 })));
        assert!(matches!(marginal(&v, &[1, 1]), Err(Error::DuplicateMode(1))));
    }

    #[test]
    fn marginal_chf_is_restriction() {
        let l = random_symplectic(3, 2, 0.5).unwrap();
        let s = symmetrize(&(l.matrix().transpose() * l.matrix()));
        let st = new_state(&[0.1, 0.2, 0.3], &[-0.3, 0.0, 0.9], &s, &tol()).unwrap();
        let sub = marginal(&st, &[2, 0]).unwrap();
        let a = [Complex64::new(0.3, -0.1), Complex64::new(-0.2, 0.4)];
        let full = [a[1], Complex64::new(0.0, 0.0), a[0]];
        let z1 = chf(&sub, &a).unwrap();
        let z2 = chf(&st, &full).unwrap();
        assert_abs_diff_eq!((z1 - z2).norm(), 0.0, epsilon = 1e-14);
    }
}
