#ifndef GAUSSKIT_H
#define GAUSSKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GkStatus {
  GK_STATUS_OK = 0,
  GK_STATUS_NULL_POINTER = 1,
  GK_STATUS_INVALID_ARGUMENT = 2,
  // Well-formed input rejected on mathematical grounds (not a covariance,
  // not symplectic, state not pure, ...).
  GK_STATUS_DOMAIN_REJECTED = 3,
  GK_STATUS_NUMERICAL = 4,
  GK_STATUS_PANIC = 5,
} GkStatus;

// Opaque handle to a Gaussian state.
typedef struct GkState GkState;

// Opaque handle to a Gaussian symmetry `λ W(α) Γ(L)`.
typedef struct GkSymmetry GkSymmetry;

typedef struct GkTolerances {
  double sym;
  double recon;
  double psd;
  double pure;
} GkTolerances;

typedef struct GkComplex {
  double re;
  double im;
} GkComplex;

typedef struct GkMembership {
  bool member;
  bool extreme;
  bool tests_agree;
  // Verdict of the symplectic-spectrum test: 1 or 0, or -1 when the matrix
  // is not strictly positive definite and the test does not apply.
  int32_t spectrum_test;
  double min_eig_complex;
  double det_value;
  double det_bound;
  double asymmetry;
} GkMembership;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len - 1` bytes) and returns the full message length in bytes.
// Returns 0 when the last call succeeded. `buf` may be null to query the length.
size_t gk_last_error_message(char *buf, size_t len);

struct GkTolerances gk_tolerances_default(void);

// Validates and builds a state from linear coefficients `l`, `m` (length `n`)
// and covariance `s`. `tol` may be null for the defaults.
enum GkStatus gk_state_new(size_t n,
                           const double *l,
                           const double *m,
                           const double *s,
                           const struct GkTolerances *tol,
                           struct GkState **out);

enum GkStatus gk_state_vacuum(size_t n, struct GkState **out);

// Product of thermal modes with symplectic eigenvalues `d[0..n]`.
enum GkStatus gk_state_thermal(size_t n, const double *d, struct GkState **out);

void gk_state_free(struct GkState *state);

// Number of modes, or 0 for a null handle.
size_t gk_state_modes(const struct GkState *state);

// Copies `l`, `m` (length `n`) and `S` (`4n²`); any output may be null.
enum GkStatus gk_state_moments(const struct GkState *state,
                               double *out_l,
                               double *out_m,
                               double *out_s);

// Characteristic function at `alpha[0..n]`.
enum GkStatus gk_state_chf(const struct GkState *state,
                           const struct GkComplex *alpha,
                           size_t n,
                           struct GkComplex *out);

enum GkStatus gk_state_entropy_purity(const struct GkState *state,
                                      const struct GkTolerances *tol,
                                      double *out_entropy,
                                      double *out_purity);

// Writes the `k` largest eigenvalues of the density operator, descending,
// into `out_eigenvalues` (capacity `k`) and their number into `out_count`.
enum GkStatus gk_state_spectrum(const struct GkState *state,
                                size_t k,
                                const struct GkTolerances *tol,
                                double *out_eigenvalues,
                                size_t *out_count);

// Pure `2n`-mode state whose first `n` modes reproduce `state`, and the
// symmetry taking the `2n`-mode vacuum to it. `out_symmetry` may be null.
enum GkStatus gk_state_purify(const struct GkState *state,
                              const struct GkTolerances *tol,
                              struct GkState **out_state,
                              struct GkSymmetry **out_symmetry);

// Reduced state on the 0-based modes `keep[0..count]`, in the given order.
enum GkStatus gk_state_marginal(const struct GkState *state,
                                const size_t *keep,
                                size_t count,
                                struct GkState **out);

// Membership of `s` in the set of quantum covariance matrices. When `out_d`
// is non-null and `s` is strictly positive definite, the `n` symplectic
// eigenvalues are written there (descending); otherwise it is left untouched.
enum GkStatus gk_kn_membership(size_t n,
                               const double *s,
                               const struct GkTolerances *tol,
                               struct GkMembership *out_report,
                               double *out_d);

// `a = Mᵀ diag(d, d) M` for symmetric positive definite `a`.
enum GkStatus gk_williamson(size_t n,
                            const double *a,
                            double tol_sym,
                            double *out_m,
                            double *out_d);

// `s = ¼(LᵀL + MᵀM)` with `L`, `M` symplectic.
enum GkStatus gk_extreme_decompose(size_t n,
                                   const double *s,
                                   const struct GkTolerances *tol,
                                   double *out_l,
                                   double *out_m,
                                   double *out_residual);

enum GkStatus gk_random_symplectic(size_t n, uint64_t seed, double spread, double *out);

// `phase · W(alpha) · Γ(l)`; `l` must be symplectic to within `tol_sym`.
enum GkStatus gk_symmetry_new(size_t n,
                              struct GkComplex phase,
                              const struct GkComplex *alpha,
                              const double *l,
                              double tol_sym,
                              struct GkSymmetry **out);

enum GkStatus gk_symmetry_identity(size_t n, struct GkSymmetry **out);

void gk_symmetry_free(struct GkSymmetry *g);

size_t gk_symmetry_modes(const struct GkSymmetry *g);

// Copies the phase, displacement (`n` entries) and symplectic part (`4n²`);
// any output may be null.
enum GkStatus gk_symmetry_parts(const struct GkSymmetry *g,
                                struct GkComplex *out_phase,
                                struct GkComplex *out_alpha,
                                double *out_l);

// `a ∘ b`.
enum GkStatus gk_symmetry_compose(const struct GkSymmetry *a,
                                  const struct GkSymmetry *b,
                                  struct GkSymmetry **out);

enum GkStatus gk_symmetry_inverse(const struct GkSymmetry *g, struct GkSymmetry **out);

// The state `UρU†`.
enum GkStatus gk_symmetry_act(const struct GkSymmetry *g,
                              const struct GkState *state,
                              struct GkState **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSKIT_H */
