//! Truncated Fock-space oracle for one and two modes.
//!
//! Everything here is deliberately brute force: operators are dense matrices
//! in the number basis `{|0⟩, …, |N⟩}` per mode, and unitaries are matrix
//! exponentials of truncated generators. It shares no code path with the
//! phase-space formulas it is used to check.
//!
//! Conventions: `a = (q + ip)/√2`, `D(α) = exp(αa† − ᾱa)`,
//! rotation `exp(−iθa†a)`, squeeze `exp(½(ζ̄a² − ζa†²))`.

use nalgebra::Schur;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{expm_antihermitian, expm_minus_i_hermitian, CMat, CVec};
use crate::state::GaussianState;
use crate::symmetry::GaussianSymmetry;
use crate::symplectic::{euler_decompose, SymplecticMatrix};
use crate::tol::TOL_SYM;
use crate::williamson::williamson_decompose;

pub const MAX_CUTOFF: usize = 100;
/// Largest squeezing accepted by [`gaussian_unitary_oracle`].
pub const MAX_ORACLE_SQUEEZE: f64 = 0.6;
/// `|Tr ρ − 1|` beyond which [`oracle_chf`] refuses to answer.
pub const ORACLE_TRACE_TOL: f64 = 1e-3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    cutoff: usize,
    modes: usize,
    matrix: CMat,
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 || cutoff > MAX_CUTOFF {
        return Err(Error::InvalidArgument(format!(
            "cutoff must lie in 1..={MAX_CUTOFF} (got {cutoff})"
        )));
    }
    Ok(())
}

impl FockOperator {
    pub fn new(cutoff: usize, modes: usize, matrix: CMat) -> Result<Self> {
        check_cutoff(cutoff)?;
        if !(1..=2).contains(&modes) {
            return Err(Error::InvalidArgument(format!(
                "the oracle handles 1 or 2 modes (got {modes})"
            )));
        }
        let dim = (cutoff + 1).pow(modes as u32);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(FockOperator {
            cutoff,
            modes,
            matrix,
        })
    }

    fn single(cutoff: usize, matrix: CMat) -> Self {
        FockOperator {
            cutoff,
            modes: 1,
            matrix,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn adjoint(&self) -> Self {
        FockOperator {
            matrix: self.matrix.adjoint(),
            ..*self
        }
    }

    pub fn mul(&self, other: &FockOperator) -> Result<Self> {
        if self.cutoff != other.cutoff || self.modes != other.modes {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(FockOperator {
            matrix: &self.matrix * &other.matrix,
            ..*self
        })
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        max_entry(&(&self.matrix - self.matrix.adjoint())) <= tol
    }

    /// `‖V†V − I‖_max` restricted to the leading `size × size` block.
    pub fn unitarity_defect(&self, size: usize) -> f64 {
        let p = self.matrix.adjoint() * &self.matrix;
        let k = size.min(self.dim());
        max_entry(&(p.view((0, 0), (k, k)) - CMat::identity(k, k)))
    }

    pub fn scale(&self, z: Complex64) -> Self {
        FockOperator {
            matrix: &self.matrix * z,
            ..*self
        }
    }
}

pub fn max_entry(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest entry difference on the leading `size × size` block.
pub fn interior_max_diff(a: &CMat, b: &CMat, size: usize) -> f64 {
    let k = size.min(a.nrows()).min(b.nrows());
    max_entry(&(a.view((0, 0), (k, k)) - b.view((0, 0), (k, k))))
}

pub fn ladder(cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff)?;
    Ok(FockOperator::single(cutoff, ladder_matrix(cutoff)))
}

fn ladder_matrix(cutoff: usize) -> CMat {
    let mut a = CMat::zeros(cutoff + 1, cutoff + 1);
    for k in 1..=cutoff {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// Truncated exponential vector `Σ zᵏ/√k! |k⟩`.
pub fn coherent_vec(z: Complex64, cutoff: usize) -> Result<CVec> {
    check_cutoff(cutoff)?;
    let mut v = CVec::zeros(cutoff + 1);
    v[0] = ONE;
    for k in 1..=cutoff {
        v[k] = v[k - 1] * z / (k as f64).sqrt();
    }
    Ok(v)
}

fn displacement_matrix(alpha: Complex64, cutoff: usize) -> CMat {
    let a = ladder_matrix(cutoff);
    let g = a.adjoint() * alpha - &a * alpha.conj();
    expm_antihermitian(&g)
}

pub fn displacement_op(alpha: Complex64, cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff)?;
    Ok(FockOperator::single(cutoff, displacement_matrix(alpha, cutoff)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleGate {
    /// `exp(−iθa†a)`, the image of `[[cos θ, sin θ], [−sin θ, cos θ]]`.
    Rotation { theta: f64 },
    /// `exp(½(ζ̄a² − ζa†²))`, `ζ = re^{iφ}`; for `φ = 0` the image of `diag(e^{−r}, e^{r})`.
    Squeeze { r: f64, phi: f64 },
}

fn rotation_matrix(theta: f64, cutoff: usize) -> CMat {
    let a = ladder_matrix(cutoff);
    let g = a.adjoint() * &a * Complex64::new(0.0, -theta);
    expm_antihermitian(&g)
}

fn squeeze_matrix(r: f64, phi: f64, cutoff: usize) -> CMat {
    let a = ladder_matrix(cutoff);
    let ad = a.adjoint();
    let zeta = Complex64::from_polar(r, phi);
    let g = (&a * &a * zeta.conj() - &ad * &ad * zeta) * Complex64::new(0.5, 0.0);
    expm_antihermitian(&g)
}

pub fn gaussian_unitary_oracle(gate: OracleGate, cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff)?;
    let m = match gate {
        OracleGate::Rotation { theta } => rotation_matrix(theta, cutoff),
        OracleGate::Squeeze { r, phi } => {
            if !(r.abs() <= MAX_ORACLE_SQUEEZE) {
                return Err(Error::SqueezeOutOfRange {
                    r,
                    max: MAX_ORACLE_SQUEEZE,
                });
            }
            squeeze_matrix(r, phi, cutoff)
        }
    };
    Ok(FockOperator::single(cutoff, m))
}

/// `(1 − e^{−s}) e^{−s a†a}`, not renormalized after truncation. `s = ∞`
/// gives the vacuum projector.
pub fn thermal_rho(s: f64, cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff)?;
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("thermal parameter s must be positive (got {s})")));
    }
    let mut rho = CMat::zeros(cutoff + 1, cutoff + 1);
    if s.is_infinite() {
        rho[(0, 0)] = ONE;
    } else {
        let pre = -(-s).exp_m1();
        for k in 0..=cutoff {
            rho[(k, k)] = Complex64::new(pre * (-s * k as f64).exp(), 0.0);
        }
    }
    Ok(FockOperator::single(cutoff, rho))
}

/// `Tr ρ (A ⊗ B)` without forming the Kronecker product.
fn trace_against_product(rho: &CMat, a: &CMat, b: &CMat) -> Complex64 {
    let d = a.nrows();
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            let col = i * d + j;
            for k in 0..d {
                let aki = a[(k, i)];
                if aki == ZERO {
                    continue;
                }
                for l in 0..d {
                    acc += rho[(k * d + l, col)] * aki * b[(l, j)];
                }
            }
        }
    }
    acc
}

/// `Tr ρ D(α)` with `D` built per mode.
pub fn oracle_chf(rho: &FockOperator, alpha: &[Complex64]) -> Result<Complex64> {
    if alpha.len() != rho.modes {
        return Err(Error::DimensionMismatch {
            expected: rho.modes,
            found: alpha.len(),
        });
    }
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > ORACLE_TRACE_TOL {
        return Err(Error::OracleTrace { trace });
    }
    let n = rho.cutoff;
    Ok(match rho.modes {
        1 => (&rho.matrix * displacement_matrix(alpha[0], n)).trace(),
        _ => trace_against_product(
            &rho.matrix,
            &displacement_matrix(alpha[0], n),
            &displacement_matrix(alpha[1], n),
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

pub fn partial_trace(rho: &FockOperator, keep: Keep) -> Result<FockOperator> {
    let d = rho.cutoff + 1;
    if rho.modes != 2 || rho.dim() != d * d {
        return Err(Error::InvalidArgument(
            "partial trace needs a two-mode operator of dimension (N+1)^2".into(),
        ));
    }
    let m = &rho.matrix;
    let out = match keep {
        Keep::First => CMat::from_fn(d, d, |i, k| (0..d).map(|j| m[(i * d + j, k * d + j)]).sum()),
        Keep::Second => CMat::from_fn(d, d, |j, l| (0..d).map(|i| m[(i * d + j, i * d + l)]).sum()),
    };
    Ok(FockOperator::single(rho.cutoff, out))
}

/// `2^{−1/2} [[−I, I], [iI, iI]]` on `ℂ²ⁿ`.
pub fn qft_kernel_unitary(n: usize) -> Result<CMat> {
    if n == 0 {
        return Err(Error::InvalidModeCount(0));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        u[(j, j)] = Complex64::new(-r, 0.0);
        u[(j, n + j)] = Complex64::new(r, 0.0);
        u[(n + j, j)] = Complex64::new(0.0, r);
        u[(n + j, n + j)] = Complex64::new(0.0, r);
    }
    Ok(u)
}

/// Complex unitary `U = X + iY` of an orthogonal symplectic `[[X, −Y], [Y, X]]`.
fn passive_unitary(v: &nalgebra::DMatrix<f64>) -> CMat {
    let n = v.nrows() / 2;
    CMat::from_fn(n, n, |i, j| Complex64::new(v[(i, j)], v[(n + i, j)]))
}

/// Hermitian `K` with `U = e^{iK}`, via the Schur form of the normal matrix `U`.
fn unitary_log(u: &CMat) -> CMat {
    let (q, t) = Schur::new(u.clone()).unpack();
    let phases = CVec::from_iterator(t.nrows(), (0..t.nrows()).map(|k| Complex64::new(t[(k, k)].arg(), 0.0)));
    let k = &q * CMat::from_diagonal(&phases) * q.adjoint();
    (&k + k.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Euler factors of a symplectic matrix: `L = V₁ diag(D, D⁻¹) V₂`.
struct EulerParts {
    u1: CMat,
    squeeze: Vec<f64>,
    u2: CMat,
}

fn euler_parts(l: &SymplecticMatrix) -> Result<EulerParts> {
    let e = euler_decompose(l.matrix(), TOL_SYM.max(10.0 * l.residual()))?;
    Ok(EulerParts {
        u1: passive_unitary(e.v1.matrix()),
        // Γ(diag(D, 1/D)) is the squeeze with r = −ln D
        squeeze: e.d.iter().map(|d| -d.ln()).collect(),
        u2: passive_unitary(e.v2.matrix()),
    })
}

fn rotation_for(u: Complex64, cutoff: usize) -> CMat {
    // Γ(e^{iκ}) = exp(iκ a†a)
    rotation_matrix(-u.arg(), cutoff)
}

/// `Γ(L)` for a single-mode symplectic `L`, fixed up to a phase. The squeeze
/// range is not capped here; callers pick a cutoff that covers it.
pub fn bogoliubov_1mode(l: &SymplecticMatrix, cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff)?;
    if l.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: l.n(),
        });
    }
    let p = euler_parts(l)?;
    let m = rotation_for(p.u1[(0, 0)], cutoff) * squeeze_matrix(p.squeeze[0], 0.0, cutoff)
        * rotation_for(p.u2[(0, 0)], cutoff);
    Ok(FockOperator::single(cutoff, m))
}

/// `λ D(α) Γ(L)` for a single-mode symmetry.
pub fn symmetry_1mode(g: &GaussianSymmetry, cutoff: usize) -> Result<FockOperator> {
    let gamma = bogoliubov_1mode(g.l(), cutoff)?;
    let d = displacement_matrix(g.alpha()[0], cutoff);
    Ok(FockOperator::single(cutoff, d * gamma.matrix * g.phase()))
}

/// `ln((d + ½)/(d − ½))`, infinite for a pure mode.
fn thermal_parameter(d: f64) -> f64 {
    if d - 0.5 <= crate::tol::TOL_PURE {
        f64::INFINITY
    } else {
        ((d + 0.5) / (d - 0.5)).ln()
    }
}

/// Density matrix of a single-mode Gaussian state:
/// `W(α) Γ(M⁻¹) ρ_s Γ(M⁻¹)† W(α)†` with `S = Mᵀ diag(d, d) M`.
pub fn oracle_state_1mode(state: &GaussianState, cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff)?;
    if state.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: state.n(),
        });
    }
    let w = williamson_decompose(state.s(), crate::tol::TOL_PSD)?;
    let rho = thermal_rho(thermal_parameter(w.d[0]), cutoff)?;
    let g = GaussianSymmetry::new(ONE, state.weyl_alpha(), w.m.inverse())?;
    let u = symmetry_1mode(&g, cutoff)?.matrix;
    Ok(FockOperator::single(cutoff, &u * rho.matrix * u.adjoint()))
}

/// A two-mode pure vector stored as the matrix `Ψ[k₁, k₂]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeVector {
    cutoff: usize,
    psi: CMat,
}

impl TwoModeVector {
    pub fn vacuum(cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff)?;
        let mut psi = CMat::zeros(cutoff + 1, cutoff + 1);
        psi[(0, 0)] = ONE;
        Ok(TwoModeVector { cutoff, psi })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &CMat {
        &self.psi
    }

    pub fn norm_sqr(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `(A ⊗ I)ψ` or `(I ⊗ A)ψ`.
    pub fn apply_local(&self, a: &CMat, keep: Keep) -> Self {
        let psi = match keep {
            Keep::First => a * &self.psi,
            Keep::Second => &self.psi * a.transpose(),
        };
        TwoModeVector { psi, ..*self }
    }

    /// `Γ(U) = exp(i Σ K_jk a_j†a_k)`, `U = e^{iK}`, applied block by block in
    /// the total photon number. Blocks above the cutoff are truncated.
    pub fn apply_passive(&self, u: &CMat) -> Self {
        let k = unitary_log(u);
        let n = self.cutoff;
        let mut out = CMat::zeros(n + 1, n + 1);
        for total in 0..=2 * n {
            let lo = total.saturating_sub(n);
            let hi = total.min(n);
            let size = hi - lo + 1;
            let mut h = CMat::zeros(size, size);
            for k1 in lo..=hi {
                let k2 = total - k1;
                let c = k1 - lo;
                h[(c, c)] = k[(0, 0)] * k1 as f64 + k[(1, 1)] * k2 as f64;
                if k1 < hi {
                    h[(c + 1, c)] = k[(0, 1)] * (((k1 + 1) * k2) as f64).sqrt();
                }
                if k1 > lo {
                    h[(c - 1, c)] = k[(1, 0)] * ((k1 * (k2 + 1)) as f64).sqrt();
                }
            }
            let g = expm_minus_i_hermitian(&(-h));
            for row in 0..size {
                let mut acc = ZERO;
                for col in 0..size {
                    acc += g[(row, col)] * self.psi[(lo + col, total - lo - col)];
                }
                out[(lo + row, total - lo - row)] = acc;
            }
        }
        TwoModeVector { psi: out, ..*self }
    }

    /// Drops every amplitude with an occupation above `cutoff`.
    pub fn truncate(&self, cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff)?;
        let k = (cutoff + 1).min(self.cutoff + 1);
        let mut psi = CMat::zeros(cutoff + 1, cutoff + 1);
        psi.view_mut((0, 0), (k, k)).copy_from(&self.psi.view((0, 0), (k, k)));
        Ok(TwoModeVector { cutoff, psi })
    }

    /// `|ψ⟩⟨ψ|` with basis index `k₁(N+1) + k₂`.
    pub fn density(&self) -> FockOperator {
        let d = self.cutoff + 1;
        let v = CVec::from_iterator(d * d, (0..d * d).map(|idx| self.psi[(idx / d, idx % d)]));
        FockOperator {
            cutoff: self.cutoff,
            modes: 2,
            matrix: &v * v.adjoint(),
        }
    }

    /// Reduced density matrix of one mode, straight from the amplitudes.
    pub fn reduced(&self, keep: Keep) -> FockOperator {
        let m = match keep {
            Keep::First => &self.psi * self.psi.adjoint(),
            Keep::Second => self.psi.transpose() * self.psi.map(|z| z.conj()),
        };
        FockOperator::single(self.cutoff, m)
    }
}

/// `U|0⟩` for a two-mode symmetry `U = λW(α)Γ(L)`, with `Γ(L)` factored as
/// passive · local squeezers · passive through the Euler decomposition.
pub fn two_mode_vacuum_action(g: &GaussianSymmetry, cutoff: usize) -> Result<TwoModeVector> {
    if g.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: g.n(),
        });
    }
    let p = euler_parts(g.l())?;
    let vac = TwoModeVector::vacuum(cutoff)?;
    // the trailing passive factor fixes the vacuum
    let squeezed = vac
        .apply_local(&squeeze_matrix(p.squeeze[0], 0.0, cutoff), Keep::First)
        .apply_local(&squeeze_matrix(p.squeeze[1], 0.0, cutoff), Keep::Second);
    let mixed = squeezed.apply_passive(&p.u1);
    let shifted = mixed
        .apply_local(&displacement_matrix(g.alpha()[0], cutoff), Keep::First)
        .apply_local(&displacement_matrix(g.alpha()[1], cutoff), Keep::Second);
    Ok(TwoModeVector {
        psi: shifted.psi * g.phase(),
        ..shifted
    })
}
