//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;
pub type RVec = DVector<f64>;
pub type CVec = DVector<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest absolute entry.
pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm()))
}

/// `max |m - mᵀ|`.
pub fn asymmetry(m: &RMat) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetrize(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

/// Validates a square matrix of even order and returns the mode count.
pub fn phase_space_modes(m: &RMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let dim = m.nrows();
    if !dim.is_multiple_of(2) {
        return Err(Error::OddDimension(dim));
    }
    if dim == 0 {
        return Err(Error::InvalidModeCount(0));
    }
    Ok(dim / 2)
}

/// Symmetric eigendecomposition with eigenvalues sorted in descending order.
pub fn sym_eigen_desc(m: &RMat) -> (RVec, RMat) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = RVec::from_iterator(order.len(), order.iter().map(|&k| eig.eigenvalues[k]));
    let vecs = RMat::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    (vals, vecs)
}

/// Hermitian eigendecomposition, eigenvalues descending.
pub fn herm_eigen_desc(m: &CMat) -> (RVec, CMat) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = RVec::from_iterator(order.len(), order.iter().map(|&k| eig.eigenvalues[k]));
    let vecs = CMat::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    (vals, vecs)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn herm_eigenvalues_desc(m: &CMat) -> RVec {
    let mut vals: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    RVec::from_vec(vals)
}

pub fn min_sym_eigenvalue(m: &RMat) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Principal square root of a symmetric positive semidefinite matrix.
/// Negative eigenvalues from rounding are clamped to zero.
pub fn sqrtm_psd(m: &RMat) -> RMat {
    let eig = SymmetricEigen::new(m.clone());
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let v = &eig.eigenvectors;
    v * RMat::from_diagonal(&roots) * v.transpose()
}

/// Orthogonal polar factor, i.e. the orthogonal matrix nearest to `m`.
pub fn nearest_orthogonal(m: &RMat) -> Result<RMat> {
    let svd = SVD::new(m.clone(), true, true);
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => Ok(u * v_t),
        _ => Err(Error::Numerical("SVD did not converge".into())),
    }
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `exp(-iH)` for Hermitian `H`, computed from its eigendecomposition.
pub fn expm_minus_i_hermitian(h: &CMat) -> CMat {
    let eig = SymmetricEigen::new(h.clone());
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l));
    let v = &eig.eigenvectors;
    v * CMat::from_diagonal(&phases) * v.adjoint()
}

/// Matrix exponential of an anti-Hermitian generator `g`.
pub fn expm_antihermitian(g: &CMat) -> CMat {
    // g = -iH with H = ig Hermitian
    let h = g * I;
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    expm_minus_i_hermitian(&h)
}

/// Block-diagonal `diag(a, b)` for a phase-space matrix.
pub fn diag_pq(a: &[f64], b: &[f64]) -> RMat {
    let vals: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    RMat::from_diagonal(&RVec::from_vec(vals))
}

/// Determinant via LU.
pub fn det(m: &RMat) -> f64 {
    m.clone().determinant()
}

pub fn mat_from_rows(rows: &[Vec<f64>]) -> Result<RMat> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch {
            expected: ncols,
            found: bad.len(),
        });
    }
    Ok(RMat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub fn mat_to_rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sqrtm_squares_back() {
        let a = RMat::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let r = sqrtm_psd(&a);
        assert_abs_diff_eq!(&r * &r, a, epsilon = 1e-12);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let theta = 0.7;
        let g = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(-theta, 0.0),
                Complex64::new(theta, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let u = expm_antihermitian(&g);
        assert_abs_diff_eq!(u[(0, 0)].re, theta.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(u[(1, 0)].re, theta.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(u[(0, 1)].re, -theta.sin(), epsilon = 1e-14);
    }

    #[test]
    fn phase_space_modes_rejects_odd() {
        assert!(matches!(
            phase_space_modes(&RMat::identity(3, 3)),
            Err(Error::OddDimension(3))
        ));
        assert!(matches!(
            phase_space_modes(&RMat::zeros(2, 4)),
            Err(Error::NotSquare { .. })
        ));
    }
}
