//! Seeded generators for random covariance matrices, states and symmetries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{diag_pq, symmetrize, RMat, RVec};
use crate::state::GaussianState;
use crate::symmetry::GaussianSymmetry;
use crate::symplectic::{random_symplectic, SymplecticMatrix};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidModeCount(0));
    }
    Ok(())
}

fn random_orthogonal(dim: usize, r: &mut ChaCha8Rng) -> RMat {
    let g = RMat::from_fn(dim, dim, |_, _| r.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (q, rr) = (qr.q(), qr.r());
    // fix column signs so the distribution is Haar
    let signs = RMat::from_diagonal(&RVec::from_fn(dim, |i, _| rr[(i, i)].signum()));
    q * signs
}

/// Symmetric positive definite `2n × 2n` matrix with condition number at most
/// `max_cond`: eigenvalues log-uniform in `[scale/max_cond, scale]` for a
/// random scale in `[1, 10]`, eigenvectors Haar.
pub fn random_spd(n: usize, seed: u64, max_cond: f64) -> Result<RMat> {
    check_n(n)?;
    if !(max_cond >= 1.0) {
        return Err(Error::InvalidArgument(format!("max_cond must be >= 1 (got {max_cond})")));
    }
    let mut r = rng(seed);
    let dim = 2 * n;
    let q = random_orthogonal(dim, &mut r);
    let scale: f64 = r.random_range(1.0..10.0);
    let span = max_cond.ln();
    let vals = RVec::from_fn(dim, |_, _| scale * (-span * r.random::<f64>()).exp());
    Ok(symmetrize(&(&q * RMat::from_diagonal(&vals) * q.transpose())))
}

/// Random symmetric matrix whose entries are standard normal, shifted by a
/// multiple of the identity drawn from `[−1, 2]`; may fail to be PD.
pub fn random_symmetric(n: usize, seed: u64) -> Result<RMat> {
    check_n(n)?;
    let mut r = rng(seed);
    let dim = 2 * n;
    let g = RMat::from_fn(dim, dim, |_, _| 0.5 * r.sample::<f64, _>(StandardNormal));
    let shift: f64 = r.random_range(-1.0..2.0);
    Ok(symmetrize(&g) + RMat::identity(dim, dim) * shift)
}

/// `Lᵀ diag(d, d) L` with `d_j` uniform in `[d_min, d_max]`.
pub fn random_congruent(n: usize, seed: u64, d_min: f64, d_max: f64, spread: f64) -> Result<RMat> {
    check_n(n)?;
    let mut r = rng(seed);
    let l = random_symplectic(n, r.random(), spread)?;
    let d: Vec<f64> = (0..n).map(|_| r.random_range(d_min..=d_max)).collect();
    Ok(symmetrize(&(l.matrix().transpose() * diag_pq(&d, &d) * l.matrix())))
}

/// A member of `K_n`: symplectic eigenvalues uniform in `[½, 2]`, with each
/// mode independently pure with probability ¼.
pub fn random_member(n: usize, seed: u64) -> Result<RMat> {
    check_n(n)?;
    let mut r = rng(seed);
    let l = random_symplectic(n, r.random(), 0.4)?;
    let d: Vec<f64> = (0..n)
        .map(|_| {
            if r.random_bool(0.25) {
                0.5
            } else {
                r.random_range(0.5..2.0)
            }
        })
        .collect();
    Ok(symmetrize(&(l.matrix().transpose() * diag_pq(&d, &d) * l.matrix())))
}

/// `½LᵀL` for a random symplectic `L`.
pub fn random_extreme(n: usize, seed: u64, spread: f64) -> Result<RMat> {
    let l = random_symplectic(n, seed, spread)?;
    Ok(symmetrize(&(l.matrix().transpose() * l.matrix() * 0.5)))
}

pub fn random_state(n: usize, seed: u64) -> Result<GaussianState> {
    let s = random_member(n, seed)?;
    let mut r = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let l = RVec::from_fn(n, |_, _| r.sample::<f64, _>(StandardNormal));
    let m = RVec::from_fn(n, |_, _| r.sample::<f64, _>(StandardNormal));
    Ok(GaussianState::from_parts(l, m, s))
}

pub fn random_symmetry(n: usize, seed: u64) -> Result<GaussianSymmetry> {
    check_n(n)?;
    let mut r = rng(seed);
    let phase = Complex64::from_polar(1.0, r.random_range(-3.0..3.0));
    let alpha = (0..n)
        .map(|_| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)))
        .collect();
    let l: SymplecticMatrix = random_symplectic(n, r.random(), 0.4)?;
    GaussianSymmetry::new(phase, alpha, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::kn_membership;
    use crate::linalg::min_sym_eigenvalue;
    use crate::tol::Tolerances;

    #[test]
    fn spd_condition_bound() {
        for seed in 0..20 {
            let a = random_spd(3, seed, 1e6).unwrap();
            let eig = a.clone().symmetric_eigenvalues();
            let (lo, hi) = (eig.min(), eig.max());
            assert!(lo > 0.0 && hi / lo <= 1e6 * (1.0 + 1e-6));
        }
        assert_eq!(random_spd(2, 7, 10.0).unwrap(), random_spd(2, 7, 10.0).unwrap());
    }

    #[test]
    fn members_are_members() {
        for seed in 0..20 {
            let s = random_member(2, seed).unwrap();
            assert!(kn_membership(&s, &Tolerances::default()).unwrap().member);
            assert!(min_sym_eigenvalue(&s) > 0.0);
        }
    }
}
