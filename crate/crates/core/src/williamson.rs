//! Williamson normal form `A = Mᵀ diag(d, d) M` of a strictly positive
//! definite matrix, and the symplectic spectrum `d`.
//!
//! Both routes start from the skew matrix `B = A^{1/2} J A^{1/2}`. The
//! spectrum is read off the Hermitian matrix `iB` (eigenvalues `±d_j`); the
//! decomposition builds an orthogonal `Γ` with `ΓᵀBΓ = [[0, -D], [D, 0]]`
//! and takes `M = (A^{1/2} Γ diag(d, d)^{-1/2})ᵀ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    asymmetry, diag_pq, herm_eigen_desc, herm_eigenvalues_desc, max_abs, nearest_orthogonal,
    phase_space_modes, symmetrize, CMat, RMat, I,
};
use crate::symplectic::{omega, symplectic_inverse, symplectic_residual, SymplecticMatrix};
use crate::tol::TOL_RECON;

/// Which reading of the normal-form factor reconstructed the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `M = (A^{1/2} Γ D^{-1/2})ᵀ`
    Transpose,
    /// `M = ((A^{1/2} Γ D^{-1/2})⁻¹)ᵀ`
    InverseTranspose,
}

#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    pub m: SymplecticMatrix,
    /// Symplectic eigenvalues, descending.
    pub d: Vec<f64>,
    /// `‖Mᵀ diag(d, d) M − A‖_max / ‖A‖_max`.
    pub residual: f64,
    pub symplectic_residual: f64,
    pub orientation: Orientation,
}

impl WilliamsonDecomposition {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn reconstruct(&self) -> RMat {
        let m = self.m.matrix();
        m.transpose() * diag_pq(&self.d, &self.d) * m
    }
}

struct Prepared {
    n: usize,
    a: RMat,
    sqrt_a: RMat,
    b: RMat,
}

fn prepare(a: &RMat, tol: f64) -> Result<Prepared> {
    let n = phase_space_modes(a)?;
    let asym = asymmetry(a);
    if asym > tol {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let a = symmetrize(a);
    let eig = a.clone().symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = 1e-12 * max_abs(&a).max(1.0);
    if !(min_eig > threshold) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min_eig,
        });
    }
    let v = &eig.eigenvectors;
    let sqrt_a = v * RMat::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * v.transpose();
    let b = &sqrt_a * omega(n) * &sqrt_a;
    let b = (&b - b.transpose()) * 0.5;
    Ok(Prepared { n, a, sqrt_a, b })
}

fn hermitian_of_skew(b: &RMat) -> CMat {
    b.map(|x| I * x)
}

/// Moduli `d_j` of the eigenvalue pairs `±i d_j` of `A^{1/2} J A^{1/2}`,
/// sorted descending. Invariant under `A ↦ LᵀAL` for symplectic `L`.
pub fn symplectic_spectrum(a: &RMat, tol: f64) -> Result<Vec<f64>> {
    let p = prepare(a, tol)?;
    let vals = herm_eigenvalues_desc(&hermitian_of_skew(&p.b));
    Ok(vals.iter().take(p.n).copied().collect())
}

/// Rotates `u` so that its first largest-modulus component is real positive.
fn canonical_phase(u: &mut nalgebra::DVector<Complex64>) {
    let max = u.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let k = u
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    let phase = u[k].conj() / u[k].norm();
    *u *= phase;
}

pub fn williamson_decompose(a: &RMat, tol: f64) -> Result<WilliamsonDecomposition> {
    let Prepared { n, a, sqrt_a, b } = prepare(a, tol)?;
    let (_, vecs) = herm_eigen_desc(&hermitian_of_skew(&b));

    // iB u = d u  ⇔  B Re(u) = d Im(u),  B Im(u) = -d Re(u)
    let mut gamma = RMat::zeros(2 * n, 2 * n);
    let s2 = std::f64::consts::SQRT_2;
    for k in 0..n {
        let mut u = vecs.column(k).into_owned();
        canonical_phase(&mut u);
        for r in 0..2 * n {
            gamma[(r, k)] = s2 * u[r].re;
            gamma[(r, n + k)] = s2 * u[r].im;
        }
    }
    let gamma = nearest_orthogonal(&gamma)?;
    let t = gamma.transpose() * &b * &gamma;

    let mut order: Vec<(f64, usize)> = (0..n)
        .map(|k| (0.5 * (t[(n + k, k)] - t[(k, n + k)]), k))
        .collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let d: Vec<f64> = order.iter().map(|(v, _)| *v).collect();
    if d.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Numerical(
            "skew canonical form produced a non-positive symplectic eigenvalue".into(),
        ));
    }
    let mut gamma_sorted = RMat::zeros(2 * n, 2 * n);
    for (pos, (_, k)) in order.iter().enumerate() {
        gamma_sorted.set_column(pos, &gamma.column(*k));
        gamma_sorted.set_column(n + pos, &gamma.column(n + *k));
    }

    let inv_sqrt: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
    let l = &sqrt_a * &gamma_sorted * diag_pq(&inv_sqrt, &inv_sqrt);
    let norm_a = max_abs(&a);
    let dd = diag_pq(&d, &d);
    let relative = |m: &RMat| max_abs(&(m.transpose() * &dd * m - &a)) / norm_a;

    let candidates = [
        (Orientation::Transpose, l.transpose()),
        (Orientation::InverseTranspose, symplectic_inverse(&l).transpose()),
    ];
    for (orientation, m) in candidates {
        let residual = relative(&m);
        if residual <= TOL_RECON {
            let symplectic_residual = symplectic_residual(&m)?;
            return Ok(WilliamsonDecomposition {
                m: SymplecticMatrix::new_unchecked(m),
                d,
                residual,
                symplectic_residual,
                orientation,
            });
        }
    }
    Err(Error::Numerical(
        "neither orientation of the Williamson factor reconstructs the input".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_symplectic;
    use crate::tol::TOL_SYM;
    use approx::assert_abs_diff_eq;

    #[test]
    fn already_normal_form_up_to_ordering() {
        let a = diag_pq(&[2.0, 3.0], &[2.0, 3.0]);
        let w = williamson_decompose(&a, 1e-12).unwrap();
        assert_abs_diff_eq!(w.d[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.d[1], 2.0, epsilon = 1e-14);
        assert!(w.residual <= 1e-15);
        assert!(w.symplectic_residual <= 1e-14);
        // permutation-type: every row has exactly one unit-modulus entry
        for r in 0..4 {
            let row = w.m.matrix().row(r);
            let big = row.iter().filter(|x| x.abs() > 0.5).count();
            assert_eq!(big, 1);
        }
        assert_eq!(w.orientation, Orientation::Transpose);
    }

    #[test]
    fn hand_computed_single_mode() {
        let a = diag_pq(&[1.0], &[4.0]);
        let w = williamson_decompose(&a, 1e-12).unwrap();
        assert_abs_diff_eq!(w.d[0], 2.0, epsilon = 1e-14);
        let expected = diag_pq(&[2f64.powf(-0.5)], &[2f64.sqrt()]);
        assert_abs_diff_eq!(w.m.matrix().clone(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(w.reconstruct(), a, epsilon = 1e-14);
        assert_eq!(symplectic_spectrum(&a, 1e-12).unwrap().len(), 1);
        assert_abs_diff_eq!(symplectic_spectrum(&a, 1e-12).unwrap()[0], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn vacuum_spectrum() {
        let a = RMat::identity(6, 6) * 0.5;
        let d = symplectic_spectrum(&a, 1e-12).unwrap();
        assert_eq!(d.len(), 3);
        for x in d {
            assert_abs_diff_eq!(x, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn random_spd_reconstructs() {
        for seed in 0..10u64 {
            let l = random_symplectic(4, seed, 0.5).unwrap();
            let core = diag_pq(&[3.0, 1.2, 0.9, 0.6], &[3.0, 1.2, 0.9, 0.6]);
            let a = symmetrize(&(l.matrix().transpose() * core * l.matrix()));
            let w = williamson_decompose(&a, 1e-9).unwrap();
            assert!(w.residual <= 1e-8, "{}", w.residual);
            assert!(w.symplectic_residual <= TOL_SYM, "{}", w.symplectic_residual);
            for (got, want) in w.d.iter().zip([3.0, 1.2, 0.9, 0.6]) {
                assert_abs_diff_eq!(*got, want, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn spectrum_invariant_under_congruence() {
        let a = RMat::from_row_slice(
            4,
            4,
            &[
                2.0, 0.3, 0.1, 0.0, 0.3, 1.5, 0.2, 0.4, 0.1, 0.2, 1.8, 0.1, 0.0, 0.4, 0.1, 1.1,
            ],
        );
        let d0 = symplectic_spectrum(&a, 1e-12).unwrap();
        for seed in 0..5 {
            let l = random_symplectic(2, seed, 0.7).unwrap();
            let b = symmetrize(&(l.matrix().transpose() * &a * l.matrix()));
            let d1 = symplectic_spectrum(&b, 1e-9).unwrap();
            for (x, y) in d0.iter().zip(&d1) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let nonsym = RMat::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(
            williamson_decompose(&nonsym, 1e-9),
            Err(Error::NotSymmetric { .. })
        ));
        let indefinite = diag_pq(&[1.0], &[-1.0]);
        match symplectic_spectrum(&indefinite, 1e-9) {
            Err(Error::NotPositiveDefinite { min_eigenvalue }) => assert_eq!(min_eigenvalue, -1.0),
            other => panic!("unexpected {other:?}"),
        }
        let singular = diag_pq(&[1.0], &[0.0]);
        assert!(matches!(
            williamson_decompose(&singular, 1e-9),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
