//! Gaussian states `(ℓ, m, S)`, their characteristic function, spectra,
//! entropy and purity, and the wave parameters of pure states.
//!
//! `S` is the quadratic form in the characteristic function
//! `exp{−i√2(ℓᵀx − mᵀy) − (xᵀ, yᵀ) S (x; y)}`, `α = x + iy`. It is the
//! covariance of `(p, −q)`, so the off-diagonal `pq` blocks carry the
//! opposite sign of the usual `(p, q)` covariance.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use num_complex::Complex64;
use serde::Serialize;

use crate::covariance::kn_membership;
use crate::error::{Error, Result};
use crate::linalg::{diag_pq, max_abs, phase_space_modes, symmetrize, CMat, RMat, RVec};
use crate::symplectic::euler_decompose;
use crate::tol::Tolerances;
use crate::williamson::williamson_decompose;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    l: RVec,
    m: RVec,
    s: RMat,
}

pub fn new_state(l: &[f64], m: &[f64], s: &RMat, tol: &Tolerances) -> Result<GaussianState> {
    let n = phase_space_modes(s)?;
    for v in [l, m] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    let report = kn_membership(s, tol)?;
    if !report.member {
        return Err(Error::NotInKn(Box::new(report)));
    }
    Ok(GaussianState {
        l: RVec::from_column_slice(l),
        m: RVec::from_column_slice(m),
        s: symmetrize(s),
    })
}

impl GaussianState {
    pub(crate) fn from_parts(l: RVec, m: RVec, s: RMat) -> Self {
        GaussianState { l, m, s }
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModeCount(0));
        }
        Ok(GaussianState {
            l: RVec::zeros(n),
            m: RVec::zeros(n),
            s: RMat::identity(2 * n, 2 * n) * 0.5,
        })
    }

    /// Product of thermal modes with symplectic eigenvalues `d`, centred.
    pub fn thermal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        if n == 0 {
            return Err(Error::InvalidModeCount(0));
        }
        new_state(&vec![0.0; n], &vec![0.0; n], &diag_pq(d, d), &Tolerances::default())
    }

    pub fn n(&self) -> usize {
        self.l.len()
    }

    /// Mean momenta `ℓ`.
    pub fn l(&self) -> &RVec {
        &self.l
    }

    /// Mean positions `m`.
    pub fn m(&self) -> &RVec {
        &self.m
    }

    pub fn s(&self) -> &RMat {
        &self.s
    }

    /// Displacement `(m + iℓ)/√2` carrying the vacuum-centred state here.
    pub fn weyl_alpha(&self) -> Vec<Complex64> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        self.m
            .iter()
            .zip(self.l.iter())
            .map(|(&m, &l)| Complex64::new(m * r, l * r))
            .collect()
    }
}

fn check_len(n: usize, found: usize) -> Result<()> {
    if n != found {
        return Err(Error::DimensionMismatch { expected: n, found });
    }
    Ok(())
}

pub fn chf(state: &GaussianState, alpha: &[Complex64]) -> Result<Complex64> {
    let n = state.n();
    check_len(n, alpha.len())?;
    let xy = RVec::from_iterator(2 * n, alpha.iter().map(|a| a.re).chain(alpha.iter().map(|a| a.im)));
    let (x, y) = (xy.rows(0, n), xy.rows(n, n));
    let linear = std::f64::consts::SQRT_2 * (state.l.dot(&x) - state.m.dot(&y));
    let quad = xy.dot(&(&state.s * &xy));
    Ok(Complex64::new(-quad, -linear).exp())
}

/// Spectral data of `ρ`: eigenvalues `∏(1 − e^{−s_j}) e^{−Σ s_j k_j}` over
/// the thermal normal modes, with `d_j = ½ coth(s_j/2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSpectrum {
    /// Symplectic eigenvalues, descending; mode `j` of `occupation` refers to `d[j]`.
    pub d: Vec<f64>,
    /// `s_j = ln((d_j + ½)/(d_j − ½))` for the thermal modes, in mode order.
    pub s_params: Vec<f64>,
    pub pure_mode_count: usize,
    pub top_eigenvalues: Vec<SpectrumEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub eigenvalue: f64,
    /// Occupation numbers of all `n` normal modes; pure modes are always 0.
    pub occupation: Vec<u64>,
}

struct Frontier {
    exponent: f64,
    index: Vec<u64>,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    // reversed so BinaryHeap pops the smallest exponent, ties by index
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .exponent
            .total_cmp(&self.exponent)
            .then_with(|| other.index.cmp(&self.index))
    }
}

pub fn state_spectrum(state: &GaussianState, k: usize, tol: &Tolerances) -> Result<StateSpectrum> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let w = williamson_decompose(&state.s, tol.psd)?;
    let n = w.d.len();
    let thermal: Vec<usize> = (0..n).filter(|&j| w.d[j] - 0.5 > tol.pure).collect();
    let s_params: Vec<f64> = thermal
        .iter()
        .map(|&j| ((w.d[j] + 0.5) / (w.d[j] - 0.5)).ln())
        .collect();
    let log_prefactor: f64 = s_params.iter().map(|s| (-(-s).exp()).ln_1p()).sum();

    let mut top = Vec::with_capacity(k);
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    let origin = vec![0u64; thermal.len()];
    seen.insert(origin.clone());
    heap.push(Frontier {
        exponent: 0.0,
        index: origin,
    });
    while let Some(Frontier { exponent, index }) = heap.pop() {
        let mut occupation = vec![0u64; n];
        for (pos, &j) in thermal.iter().enumerate() {
            occupation[j] = index[pos];
        }
        top.push(SpectrumEntry {
            eigenvalue: (log_prefactor - exponent).exp(),
            occupation,
        });
        if top.len() == k {
            break;
        }
        for pos in 0..thermal.len() {
            let mut next = index.clone();
            next[pos] += 1;
            if seen.insert(next.clone()) {
                heap.push(Frontier {
                    exponent: exponent + s_params[pos],
                    index: next,
                });
            }
        }
    }
    Ok(StateSpectrum {
        pure_mode_count: n - thermal.len(),
        d: w.d,
        s_params,
        top_eigenvalues: top,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyPurity {
    /// Von Neumann entropy in nats.
    pub entropy: f64,
    /// `Tr ρ²`
    pub purity: f64,
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

pub fn entropy_purity(state: &GaussianState, tol: &Tolerances) -> Result<EntropyPurity> {
    let w = williamson_decompose(&state.s, tol.psd)?;
    let mut entropy = 0.0;
    let mut purity = 1.0;
    for &d in w.d.iter().filter(|&&d| d - 0.5 > tol.pure) {
        entropy += xlogx(d + 0.5) - xlogx(d - 0.5);
        purity /= 2.0 * d;
    }
    Ok(EntropyPurity { entropy, purity })
}

/// `|ψ⟩ = W(α) Γ(U) |e_{λ₁}⟩ ⊗ ⋯ ⊗ |e_{λₙ}⟩`, where `|e_λ⟩` is the centred
/// Gaussian with `Var q = λ²/2` and `Var p = 1/(2λ²)`.
#[derive(Debug, Clone)]
pub struct WaveParams {
    pub alpha: Vec<Complex64>,
    pub u: CMat,
    pub lambdas: Vec<f64>,
    /// `‖covariance_from_wave(U, λ) − S‖_max`
    pub residual: f64,
}

/// Orthogonal symplectic matrix `[[X, −Y], [Y, X]]` of `U = X + iY`.
pub fn unitary_to_symplectic(u: &CMat) -> RMat {
    let n = u.nrows();
    let mut r = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = u[(i, j)];
            r[(i, j)] = z.re;
            r[(n + i, n + j)] = z.re;
            r[(n + i, j)] = z.im;
            r[(i, n + j)] = -z.im;
        }
    }
    r
}

pub fn covariance_from_wave(u: &CMat, lambdas: &[f64]) -> RMat {
    let p: Vec<f64> = lambdas.iter().map(|l| 0.5 / (l * l)).collect();
    let q: Vec<f64> = lambdas.iter().map(|l| 0.5 * l * l).collect();
    let r = unitary_to_symplectic(u);
    symmetrize(&(&r * diag_pq(&p, &q) * r.transpose()))
}

pub fn pure_wave_params(state: &GaussianState, tol: &Tolerances) -> Result<WaveParams> {
    let n = state.n();
    let doubled = &state.s * 2.0;
    let w = williamson_decompose(&doubled, tol.psd)?;
    let max_excess = w
        .d
        .iter()
        .map(|d| (0.5 * d - 0.5).abs())
        .fold(0.0_f64, f64::max);
    if max_excess > tol.pure {
        return Err(Error::MixedState { max_excess });
    }
    // 2S = MᵀM = V₂ᵀ diag(D², D⁻²) V₂, and Γ(U) acts on covariances via V₂ᵀ
    let e = euler_decompose(w.m.matrix(), tol.sym)?;
    let (u, lambdas) = if e.d.iter().all(|d| d - 1.0 <= tol.pure) {
        // unsqueezed: 2S = I and every unitary works, so report the identity
        (CMat::identity(n, n), vec![1.0; n])
    } else {
        let v2t = e.v2.matrix().transpose();
        let u = CMat::from_fn(n, n, |i, j| Complex64::new(v2t[(i, j)], v2t[(n + i, j)]));
        (u, e.d.iter().map(|d| 1.0 / d).collect())
    };
    let residual = max_abs(&(covariance_from_wave(&u, &lambdas) - &state.s));
    Ok(WaveParams {
        alpha: state.weyl_alpha(),
        u,
        lambdas,
        residual,
    })
}
