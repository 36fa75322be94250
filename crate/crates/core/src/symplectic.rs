//! The symplectic form, symplectic matrices and the Euler
//! (orthogonal–diagonal–orthogonal) decomposition.
//!
//! Phase-space coordinates are ordered `(p₁..pₙ, q₁..qₙ)` everywhere, so the
//! symplectic form is `J = [[0, -I], [I, 0]]`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{diag_pq, max_abs, phase_space_modes, sym_eigen_desc, symmetrize, RMat, RVec};
use crate::tol::TOL_SYM;

/// `J = [[0, -I], [I, 0]]` for `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
    matrix: RMat,
}

impl SymplecticForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> RMat {
        self.matrix
    }
}

pub fn omega_matrix(n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(Error::InvalidModeCount(0));
    }
    Ok(SymplecticForm {
        n,
        matrix: omega(n),
    })
}

/// Unchecked form of [`omega_matrix`] for internal use (`n >= 1` assumed).
pub(crate) fn omega(n: usize) -> RMat {
    let mut j = RMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = -1.0;
        j[(n + k, k)] = 1.0;
    }
    j
}

/// Result of [`is_symplectic`]: the verdict and the max-norm residual
/// `‖LᵀJL − J‖_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticCheck {
    pub symplectic: bool,
    pub residual: f64,
}

pub fn symplectic_residual(l: &RMat) -> Result<f64> {
    let n = phase_space_modes(l)?;
    let j = omega(n);
    Ok(max_abs(&(l.transpose() * &j * l - &j)))
}

pub fn is_symplectic(l: &RMat, tol: f64) -> Result<SymplecticCheck> {
    let residual = symplectic_residual(l)?;
    Ok(SymplecticCheck {
        symplectic: residual <= tol,
        residual,
    })
}

/// A real `2n × 2n` matrix with `LᵀJL = J` (checked on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    matrix: RMat,
}

impl SymplecticMatrix {
    /// Validates `matrix` against `tol` (max-norm residual of `LᵀJL − J`).
    pub fn new(matrix: RMat, tol: f64) -> Result<Self> {
        let n = phase_space_modes(&matrix)?;
        let check = is_symplectic(&matrix, tol)?;
        if !check.symplectic {
            return Err(Error::NotSymplectic {
                residual: check.residual,
            });
        }
        Ok(SymplecticMatrix { n, matrix })
    }

    pub(crate) fn new_unchecked(matrix: RMat) -> Self {
        let n = matrix.nrows() / 2;
        SymplecticMatrix { n, matrix }
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModeCount(0));
        }
        Ok(SymplecticMatrix {
            n,
            matrix: RMat::identity(2 * n, 2 * n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> RMat {
        self.matrix
    }

    pub fn residual(&self) -> f64 {
        let j = omega(self.n);
        max_abs(&(self.matrix.transpose() * &j * &self.matrix - &j))
    }

    /// `L⁻¹ = -J Lᵀ J`, exact for symplectic `L`.
    pub fn inverse(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            n: self.n,
            matrix: symplectic_inverse(&self.matrix),
        }
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            n: self.n,
            matrix: self.matrix.transpose(),
        }
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
        }
    }
}

pub(crate) fn symplectic_inverse(l: &RMat) -> RMat {
    let n = l.nrows() / 2;
    let j = omega(n);
    -(&j * l.transpose() * &j)
}

/// Deterministic random symplectic matrix `exp(J·H)` with `H` a random
/// symmetric matrix whose entries are standard normal times `spread`.
pub fn random_symplectic(n: usize, seed: u64, spread: f64) -> Result<SymplecticMatrix> {
    if n == 0 {
        return Err(Error::InvalidModeCount(0));
    }
    if !(spread > 0.0) || !spread.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "spread must be a positive finite number (got {spread})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 2 * n;
    let g = RMat::from_fn(dim, dim, |_, _| {
        let x: f64 = StandardNormal.sample(&mut rng);
        x * spread
    });
    let h = symmetrize(&g);
    let generator = omega(n) * h;
    Ok(SymplecticMatrix {
        n,
        matrix: generator.exp(),
    })
}

/// `M = V₁ · diag(d, d⁻¹) · V₂` with `V₁, V₂` orthogonal symplectic and
/// `d` sorted descending, every entry `>= 1`.
#[derive(Debug, Clone)]
pub struct EulerDecomposition {
    pub v1: SymplecticMatrix,
    pub d: Vec<f64>,
    pub v2: SymplecticMatrix,
    /// `‖V₁ diag(d, d⁻¹) V₂ − M‖_max`.
    pub residual: f64,
}

impl EulerDecomposition {
    pub fn reconstruct(&self) -> RMat {
        let inv: Vec<f64> = self.d.iter().map(|x| 1.0 / x).collect();
        self.v1.matrix() * diag_pq(&self.d, &inv) * self.v2.matrix()
    }
}

fn project_out(v: &RVec, basis: &[RVec]) -> RVec {
    let mut r = v.clone();
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&r);
            r -= b * c;
        }
    }
    r
}

/// Euler decomposition of a symplectic matrix, built from the eigenvectors
/// of `MᵀM`: each top eigenvector `c` is paired with `Jc`, which spans the
/// reciprocal eigenvalue.
pub fn euler_decompose(m: &RMat, tol: f64) -> Result<EulerDecomposition> {
    let n = phase_space_modes(m)?;
    let check = is_symplectic(m, tol)?;
    if !check.symplectic {
        return Err(Error::NotSymplectic {
            residual: check.residual,
        });
    }
    let j = omega(n);
    let p = symmetrize(&(m.transpose() * m));
    let (_, vecs) = sym_eigen_desc(&p);

    let mut used = vec![false; 2 * n];
    let mut basis: Vec<RVec> = Vec::with_capacity(2 * n);
    let mut tops: Vec<RVec> = Vec::with_capacity(n);
    while tops.len() < n {
        let mut pick: Option<(usize, RVec, f64)> = None;
        let mut best: Option<(usize, RVec, f64)> = None;
        for k in (0..2 * n).filter(|&k| !used[k]) {
            let r = project_out(&vecs.column(k).into_owned(), &basis);
            let norm = r.norm();
            if norm > 0.7 {
                pick = Some((k, r, norm));
                break;
            }
            if best.as_ref().is_none_or(|b| norm > b.2) {
                best = Some((k, r, norm));
            }
        }
        let (k, r, norm) = pick
            .or(best)
            .ok_or_else(|| Error::Numerical("Euler pairing ran out of eigenvectors".into()))?;
        if norm < 1e-6 {
            return Err(Error::Numerical(
                "Euler pairing found no independent eigenvector".into(),
            ));
        }
        used[k] = true;
        let c = r / norm;
        let jc = &j * &c;
        basis.push(c.clone());
        basis.push(jc);
        tops.push(c);
    }

    let mut pairs: Vec<(f64, RVec)> = tops
        .into_iter()
        .map(|c| {
            let rq = c.dot(&(&p * &c));
            (rq.max(1.0).sqrt(), c)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let d: Vec<f64> = pairs.iter().map(|(x, _)| *x).collect();
    let mut v2t = RMat::zeros(2 * n, 2 * n);
    for (k, (_, c)) in pairs.iter().enumerate() {
        v2t.set_column(k, c);
        v2t.set_column(n + k, &(&j * c));
    }
    let inv: Vec<f64> = d.iter().map(|x| 1.0 / x).collect();
    let v1 = m * &v2t * diag_pq(&inv, &d);
    let v2 = v2t.transpose();
    let recon = &v1 * diag_pq(&d, &inv) * &v2;
    let residual = max_abs(&(recon - m));
    Ok(EulerDecomposition {
        v1: SymplecticMatrix::new_unchecked(v1),
        d,
        v2: SymplecticMatrix::new_unchecked(v2),
        residual,
    })
}

/// Convenience wrapper using the default symplectic tolerance.
pub fn euler_decompose_default(m: &SymplecticMatrix) -> Result<EulerDecomposition> {
    euler_decompose(m.matrix(), TOL_SYM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn orthogonality(m: &RMat) -> f64 {
        max_abs(&(m.transpose() * m - RMat::identity(m.nrows(), m.ncols())))
    }

    #[test]
    fn omega_block_structure() {
        let j1 = omega_matrix(1).unwrap();
        assert_eq!(j1.matrix(), &RMat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let j2 = omega_matrix(2).unwrap().into_matrix();
        assert_eq!(j2[(0, 2)], -1.0);
        assert_eq!(j2[(1, 3)], -1.0);
        assert_eq!(j2[(2, 0)], 1.0);
        assert_eq!(j2[(3, 1)], 1.0);
        assert_eq!(j2.iter().filter(|x| **x != 0.0).count(), 4);
        let j3 = omega_matrix(3).unwrap().into_matrix();
        assert_eq!(&j3 * &j3, -RMat::identity(6, 6));
        assert_eq!(j3.transpose(), -&j3);
        assert!(matches!(omega_matrix(0), Err(Error::InvalidModeCount(0))));
    }

    #[test]
    fn symplectic_checks() {
        let id = is_symplectic(&RMat::identity(2, 2), TOL_SYM).unwrap();
        assert!(id.symplectic);
        assert_eq!(id.residual, 0.0);
        assert!(is_symplectic(&diag_pq(&[2.0], &[0.5]), TOL_SYM).unwrap().symplectic);
        let bad = is_symplectic(&diag_pq(&[2.0], &[2.0]), TOL_SYM).unwrap();
        assert!(!bad.symplectic);
        assert_eq!(bad.residual, 3.0);
        assert!(matches!(
            is_symplectic(&RMat::identity(3, 3), TOL_SYM),
            Err(Error::OddDimension(3))
        ));
    }

    #[test]
    fn random_symplectic_is_symplectic_and_deterministic() {
        let a = random_symplectic(2, 7, 0.5).unwrap();
        assert!(a.residual() <= 1e-9);
        assert!((a.matrix().clone().determinant() - 1.0).abs() <= 1e-8);
        let b = random_symplectic(2, 7, 0.5).unwrap();
        assert_eq!(a, b);
        let c = random_symplectic(2, 8, 0.5).unwrap();
        assert_ne!(a, c);
        let tiny = random_symplectic(3, 1, 1e-14).unwrap();
        assert_abs_diff_eq!(tiny.into_matrix(), RMat::identity(6, 6), epsilon = 1e-12);
        assert!(random_symplectic(1, 0, 0.0).is_err());
        assert!(random_symplectic(0, 0, 1.0).is_err());
    }

    #[test]
    fn inverse_is_exact() {
        let l = random_symplectic(3, 11, 0.4).unwrap();
        let prod = l.matrix() * l.inverse().matrix();
        assert_abs_diff_eq!(prod, RMat::identity(6, 6), epsilon = 1e-12);
    }

    #[test]
    fn euler_of_identity() {
        let e = euler_decompose(&RMat::identity(4, 4), TOL_SYM).unwrap();
        assert_eq!(e.d, vec![1.0, 1.0]);
        assert!(orthogonality(e.v1.matrix()) < 1e-12);
        assert!(orthogonality(e.v2.matrix()) < 1e-12);
        assert!(e.residual < 1e-14);
    }

    #[test]
    fn euler_of_normal_form() {
        let m = diag_pq(&[2.0], &[0.5]);
        let e = euler_decompose(&m, TOL_SYM).unwrap();
        assert_abs_diff_eq!(e.d[0], 2.0, epsilon = 1e-14);
        let v1 = e.v1.matrix();
        let v2 = e.v2.matrix();
        assert_abs_diff_eq!(v1[(0, 1)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v2[(0, 1)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v1[(0, 0)].abs(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v2[(0, 0)].abs(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn euler_of_random() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 6);
            let m = random_symplectic(n, seed, 0.6).unwrap();
            let e = euler_decompose(m.matrix(), TOL_SYM).unwrap();
            assert!(e.residual <= 1e-8, "seed {seed}: {}", e.residual);
            for v in [e.v1.matrix(), e.v2.matrix()] {
                assert!(orthogonality(v) <= 1e-9, "seed {seed}: {}", orthogonality(v));
                assert!(symplectic_residual(v).unwrap() <= 1e-9);
            }
            assert!(e.d.windows(2).all(|w| w[0] >= w[1]));
            assert!(e.d.iter().all(|&x| x >= 1.0));
        }
    }

    #[test]
    fn euler_rejects_non_symplectic() {
        let err = euler_decompose(&diag_pq(&[2.0], &[2.0]), TOL_SYM).unwrap_err();
        assert!(matches!(err, Error::NotSymplectic { residual } if residual == 3.0));
    }
}
