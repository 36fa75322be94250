//! C ABI over `gausskit`.
//!
//! Phase-space matrices cross the boundary as row-major `double` arrays of
//! length `4n²` in the `(p₁..pₙ, q₁..qₙ)` ordering. Every entry point returns a
//! [`GkStatus`]; on failure a message is kept per thread and can be read with
//! [`gk_last_error_message`]. Handles written through out-pointers belong to
//! the caller and are released with the matching `_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gausskit::covariance::{extreme_decompose, kn_membership};
use gausskit::purification::{marginal, purify};
use gausskit::state::{chf, entropy_purity, new_state, state_spectrum, GaussianState};
use gausskit::symmetry::{act_on_state, compose, inverse, GaussianSymmetry};
use gausskit::symplectic::{random_symplectic, SymplecticMatrix};
use gausskit::tol::Tolerances;
use gausskit::williamson::williamson_decompose;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Well-formed input rejected on mathematical grounds (not a covariance,
    /// not symplectic, state not pure, ...).
    DomainRejected = 3,
    Numerical = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GkComplex {
    pub re: f64,
    pub im: f64,
}

impl From<GkComplex> for Complex64 {
    fn from(z: GkComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for GkComplex {
    fn from(z: Complex64) -> Self {
        GkComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GkTolerances {
    pub sym: f64,
    pub recon: f64,
    pub psd: f64,
    pub pure: f64,
}

impl From<GkTolerances> for Tolerances {
    fn from(t: GkTolerances) -> Self {
        Tolerances { sym: t.sym, recon: t.recon, psd: t.psd, pure: t.pure }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GkMembership {
    pub member: bool,
    pub extreme: bool,
    pub tests_agree: bool,
    /// Verdict of the symplectic-spectrum test: 1 or 0, or -1 when the matrix
    /// is not strictly positive definite and the test does not apply.
    pub spectrum_test: i32,
    pub min_eig_complex: f64,
    pub det_value: f64,
    pub det_bound: f64,
    pub asymmetry: f64,
}

/// Opaque handle to a Gaussian state.
pub struct GkState(GaussianState);

/// Opaque handle to a Gaussian symmetry `λ W(α) Γ(L)`.
pub struct GkSymmetry(GaussianSymmetry);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Fail {
    Null(&'static str),
    Arg(String),
    Lib(gausskit::Error),
}

impl From<gausskit::Error> for Fail {
    fn from(e: gausskit::Error) -> Self {
        Fail::Lib(e)
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GkStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            GkStatus::NullPointer
        }
        Ok(Err(Fail::Arg(msg))) => {
            set_error(msg);
            GkStatus::InvalidArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            if e.is_domain_rejection() {
                GkStatus::DomainRejected
            } else if matches!(e, gausskit::Error::Numerical(_)) {
                GkStatus::Numerical
            } else {
                GkStatus::InvalidArgument
            }
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            GkStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &'static str) -> Result<&'a mut [T], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn href<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn tolerances(p: *const GkTolerances) -> Tolerances {
    p.as_ref().map(|t| Tolerances::from(*t)).unwrap_or_default()
}

fn modes(n: usize) -> Result<usize, Fail> {
    if n == 0 {
        return Err(Fail::Lib(gausskit::Error::InvalidModeCount(0)));
    }
    n.checked_mul(2)
        .and_then(|d| d.checked_mul(d))
        .ok_or_else(|| Fail::Arg(format!("mode count {n} too large")))
}

unsafe fn read_matrix(n: usize, p: *const f64, what: &'static str) -> Result<DMatrix<f64>, Fail> {
    let len = modes(n)?;
    Ok(DMatrix::from_row_slice(2 * n, 2 * n, slice(p, len, what)?))
}

unsafe fn write_matrix(m: &DMatrix<f64>, out: *mut f64, what: &'static str) -> Result<(), Fail> {
    let dst = slice_mut(out, m.len(), what)?;
    for (k, v) in dst.iter_mut().enumerate() {
        *v = m[(k / m.ncols(), k % m.ncols())];
    }
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns the full message length in bytes.
/// Returns 0 when the last call succeeded. `buf` may be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn gk_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let k = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, k);
            *buf.add(k) = 0;
        }
        bytes.len()
    })
}

#[no_mangle]
pub extern "C" fn gk_tolerances_default() -> GkTolerances {
    let t = Tolerances::default();
    GkTolerances { sym: t.sym, recon: t.recon, psd: t.psd, pure: t.pure }
}

/// Validates and builds a state from linear coefficients `l`, `m` (length `n`)
/// and covariance `s`. `tol` may be null for the defaults.
#[no_mangle]
pub unsafe extern "C" fn gk_state_new(
    n: usize,
    l: *const f64,
    m: *const f64,
    s: *const f64,
    tol: *const GkTolerances,
    out: *mut *mut GkState,
) -> GkStatus {
    guard(|| {
        let s = read_matrix(n, s, "s")?;
        let st = new_state(slice(l, n, "l")?, slice(m, n, "m")?, &s, &tolerances(tol))?;
        put(out, GkState(st))
    })
}

#[no_mangle]
pub unsafe extern "C" fn gk_state_vacuum(n: usize, out: *mut *mut GkState) -> GkStatus {
    guard(|| put(out, GkState(GaussianState::vacuum(n)?)))
}

/// Product of thermal modes with symplectic eigenvalues `d[0..n]`.
#[no_mangle]
pub unsafe extern "C" fn gk_state_thermal(n: usize, d: *const f64, out: *mut *mut GkState) -> GkStatus {
    guard(|| {
        modes(n)?;
        put(out, GkState(GaussianState::thermal(slice(d, n, "d")?)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn gk_state_free(state: *mut GkState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of modes, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn gk_state_modes(state: *const GkState) -> usize {
    state.as_ref().map_or(0, |s| s.0.n())
}

/// Copies `l`, `m` (length `n`) and `S` (`4n²`); any output may be null.
#[no_mangle]
pub unsafe extern "C" fn gk_state_moments(
    state: *const GkState,
    out_l: *mut f64,
    out_m: *mut f64,
    out_s: *mut f64,
) -> GkStatus {
    guard(|| {
        let st = &href(state, "state")?.0;
        if !out_l.is_null() {
            slice_mut(out_l, st.n(), "l")?.copy_from_slice(st.l().as_slice());
        }
        if !out_m.is_null() {
            slice_mut(out_m, st.n(), "m")?.copy_from_slice(st.m().as_slice());
        }
        if !out_s.is_null() {
            write_matrix(st.s(), out_s, "s")?;
        }
        Ok(())
    })
}

/// Characteristic function at `alpha[0..n]`.
#[no_mangle]
pub unsafe extern "C" fn gk_state_chf(
    state: *const GkState,
    alpha: *const GkComplex,
    n: usize,
    out: *mut GkComplex,
) -> GkStatus {
    guard(|| {
        let st = &href(state, "state")?.0;
        let a: Vec<Complex64> = slice(alpha, n, "alpha")?.iter().map(|&z| z.into()).collect();
        let v = chf(st, &a)?;
        *out.as_mut().ok_or(Fail::Null("out"))? = v.into();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn gk_state_entropy_purity(
    state: *const GkState,
    tol: *const GkTolerances,
    out_entropy: *mut f64,
    out_purity: *mut f64,
) -> GkStatus {
    guard(|| {
        let ep = entropy_purity(&href(state, "state")?.0, &tolerances(tol))?;
        *out_entropy.as_mut().ok_or(Fail::Null("out_entropy"))? = ep.entropy;
        *out_purity.as_mut().ok_or(Fail::Null("out_purity"))? = ep.purity;
        Ok(())
    })
}

/// Writes the `k` largest eigenvalues of the density operator, descending,
/// into `out_eigenvalues` (capacity `k`) and their number into `out_count`.
#[no_mangle]
pub unsafe extern "C" fn gk_state_spectrum(
    state: *const GkState,
    k: usize,
    tol: *const GkTolerances,
    out_eigenvalues: *mut f64,
    out_count: *mut usize,
) -> GkStatus {
    guard(|| {
        let sp = state_spectrum(&href(state, "state")?.0, k, &tolerances(tol))?;
        let dst = slice_mut(out_eigenvalues, k, "out_eigenvalues")?;
        for (d, e) in dst.iter_mut().zip(&sp.top_eigenvalues) {
            *d = e.eigenvalue;
        }
        *out_count.as_mut().ok_or(Fail::Null("out_count"))? = sp.top_eigenvalues.len().min(k);
        Ok(())
    })
}

/// Pure `2n`-mode state whose first `n` modes reproduce `state`, and the
/// symmetry taking the `2n`-mode vacuum to it. `out_symmetry` may be null.
#[no_mangle]
pub unsafe extern "C" fn gk_state_purify(
    state: *const GkState,
    tol: *const GkTolerances,
    out_state: *mut *mut GkState,
    out_symmetry: *mut *mut GkSymmetry,
) -> GkStatus {
    guard(|| {
        let p = purify(&href(state, "state")?.0, &tolerances(tol))?;
        if out_state.is_null() {
            return Err(Fail::Null("out_state"));
        }
        if !out_symmetry.is_null() {
            put(out_symmetry, GkSymmetry(p.symmetry))?;
        }
        put(out_state, GkState(p.pure_state))
    })
}

/// Reduced state on the 0-based modes `keep[0..count]`, in the given order.
#[no_mangle]
pub unsafe extern "C" fn gk_state_marginal(
    state: *const GkState,
    keep: *const usize,
    count: usize,
    out: *mut *mut GkState,
) -> GkStatus {
    guard(|| {
        let st = marginal(&href(state, "state")?.0, slice(keep, count, "keep")?)?;
        put(out, GkState(st))
    })
}

/// Membership of `s` in the set of quantum covariance matrices. When `out_d`
/// is non-null and `s` is strictly positive definite, the `n` symplectic
/// eigenvalues are written there (descending); otherwise it is left untouched.
#[no_mangle]
pub unsafe extern "C" fn gk_kn_membership(
    n: usize,
    s: *const f64,
    tol: *const GkTolerances,
    out_report: *mut GkMembership,
    out_d: *mut f64,
) -> GkStatus {
    guard(|| {
        let s = read_matrix(n, s, "s")?;
        let r = kn_membership(&s, &tolerances(tol))?;
        let out = out_report.as_mut().ok_or(Fail::Null("out_report"))?;
        *out = GkMembership {
            member: r.member,
            extreme: r.extreme,
            tests_agree: r.tests_agree,
            spectrum_test: r.spectrum_test.map_or(-1, i32::from),
            min_eig_complex: r.min_eig_complex,
            det_value: r.det_value,
            det_bound: r.det_bound,
            asymmetry: r.asymmetry,
        };
        if let (false, Some(d)) = (out_d.is_null(), r.sympl_spectrum.as_ref()) {
            slice_mut(out_d, n, "out_d")?.copy_from_slice(&d[..n]);
        }
        Ok(())
    })
}

/// `a = Mᵀ diag(d, d) M` for symmetric positive definite `a`.
#[no_mangle]
pub unsafe extern "C" fn gk_williamson(
    n: usize,
    a: *const f64,
    tol_sym: f64,
    out_m: *mut f64,
    out_d: *mut f64,
) -> GkStatus {
    guard(|| {
        let a = read_matrix(n, a, "a")?;
        let w = williamson_decompose(&a, tol_sym)?;
        write_matrix(w.m.matrix(), out_m, "out_m")?;
        slice_mut(out_d, n, "out_d")?.copy_from_slice(&w.d);
        Ok(())
    })
}

/// `s = ¼(LᵀL + MᵀM)` with `L`, `M` symplectic.
#[no_mangle]
pub unsafe extern "C" fn gk_extreme_decompose(
    n: usize,
    s: *const f64,
    tol: *const GkTolerances,
    out_l: *mut f64,
    out_m: *mut f64,
    out_residual: *mut f64,
) -> GkStatus {
    guard(|| {
        let s = read_matrix(n, s, "s")?;
        let e = extreme_decompose(&s, &tolerances(tol))?;
        write_matrix(e.l.matrix(), out_l, "out_l")?;
        write_matrix(e.m.matrix(), out_m, "out_m")?;
        if let Some(r) = out_residual.as_mut() {
            *r = e.residual;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn gk_random_symplectic(n: usize, seed: u64, spread: f64, out: *mut f64) -> GkStatus {
    guard(|| {
        modes(n)?;
        write_matrix(random_symplectic(n, seed, spread)?.matrix(), out, "out")
    })
}

/// `phase · W(alpha) · Γ(l)`; `l` must be symplectic to within `tol_sym`.
#[no_mangle]
pub unsafe extern "C" fn gk_symmetry_new(
    n: usize,
    phase: GkComplex,
    alpha: *const GkComplex,
    l: *const f64,
    tol_sym: f64,
    out: *mut *mut GkSymmetry,
) -> GkStatus {
    guard(|| {
        let l = SymplecticMatrix::new(read_matrix(n, l, "l")?, tol_sym)?;
        let a = slice(alpha, n, "alpha")?.iter().map(|&z| z.into()).collect();
        put(out, GkSymmetry(GaussianSymmetry::new(phase.into(), a, l)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn gk_symmetry_identity(n: usize, out: *mut *mut GkSymmetry) -> GkStatus {
    guard(|| put(out, GkSymmetry(GaussianSymmetry::identity(n)?)))
}

#[no_mangle]
pub unsafe extern "C" fn gk_symmetry_free(g: *mut GkSymmetry) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

#[no_mangle]
pub unsafe extern "C" fn gk_symmetry_modes(g: *const GkSymmetry) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Copies the phase, displacement (`n` entries) and symplectic part (`4n²`);
/// any output may be null.
#[no_mangle]
pub unsafe extern "C" fn gk_symmetry_parts(
    g: *const GkSymmetry,
    out_phase: *mut GkComplex,
    out_alpha: *mut GkComplex,
    out_l: *mut f64,
) -> GkStatus {
    guard(|| {
        let g = &href(g, "symmetry")?.0;
        if let Some(p) = out_phase.as_mut() {
            *p = g.phase().into();
        }
        if !out_alpha.is_null() {
            for (d, a) in slice_mut(out_alpha, g.n(), "out_alpha")?.iter_mut().zip(g.alpha()) {
                *d = (*a).into();
            }
        }
        if !out_l.is_null() {
            write_matrix(g.l().matrix(), out_l, "out_l")?;
        }
        Ok(())
    })
}

/// `a ∘ b`.
#[no_mangle]
pub unsafe extern "C" fn gk_symmetry_compose(
    a: *const GkSymmetry,
    b: *const GkSymmetry,
    out: *mut *mut GkSymmetry,
) -> GkStatus {
    guard(|| {
        let g = compose(&href(a, "a")?.0, &href(b, "b")?.0)?;
        put(out, GkSymmetry(g))
    })
}

#[no_mangle]
pub unsafe extern "C" fn gk_symmetry_inverse(g: *const GkSymmetry, out: *mut *mut GkSymmetry) -> GkStatus {
    guard(|| put(out, GkSymmetry(inverse(&href(g, "symmetry")?.0))))
}

/// The state `UρU†`.
#[no_mangle]
pub unsafe extern "C" fn gk_symmetry_act(
    g: *const GkSymmetry,
    state: *const GkState,
    out: *mut *mut GkState,
) -> GkStatus {
    guard(|| {
        let st = act_on_state(&href(g, "symmetry")?.0, &href(state, "state")?.0)?;
        put(out, GkState(st))
    })
}
