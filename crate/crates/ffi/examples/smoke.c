/* Minimal C client: vacuum checks, purification round trip, error reporting. */
#include <math.h>
#include <stdio.h>

#include "gausskit.h"

#define CHECK(call)                                                           \
  do {                                                                        \
    GkStatus st_ = (call);                                                    \
    if (st_ != GK_STATUS_OK) {                                                \
      char msg_[256];                                                         \
      gk_last_error_message(msg_, sizeof msg_);                               \
      fprintf(stderr, "%s failed (%d): %s\n", #call, (int)st_, msg_);         \
      return 1;                                                               \
    }                                                                         \
  } while (0)

int main(void) {
  double s[4] = {0.5, 0.0, 0.0, 0.5};
  GkMembership rep;
  double d[1];
  CHECK(gk_kn_membership(1, s, NULL, &rep, d));
  if (!rep.member || !rep.extreme || fabs(d[0] - 0.5) > 1e-12) return 2;

  double th[1] = {1.0};
  GkState *rho = NULL, *pure = NULL, *back = NULL;
  GkSymmetry *g = NULL;
  CHECK(gk_state_thermal(1, th, &rho));
  CHECK(gk_state_purify(rho, NULL, &pure, &g));
  size_t keep[1] = {0};
  CHECK(gk_state_marginal(pure, keep, 1, &back));
  double cov[4];
  CHECK(gk_state_moments(back, NULL, NULL, cov));
  if (fabs(cov[0] - 1.0) > 1e-10 || fabs(cov[3] - 1.0) > 1e-10) return 3;

  double entropy, purity;
  CHECK(gk_state_entropy_purity(rho, NULL, &entropy, &purity));
  if (fabs(purity - 0.5) > 1e-9) return 4;

  double bad[4] = {0.1, 0.0, 0.0, 0.1};
  GkState *nope = NULL;
  double zero[1] = {0.0};
  GkStatus st = gk_state_new(1, zero, zero, bad, NULL, &nope);
  if (st != GK_STATUS_DOMAIN_REJECTED || nope != NULL) return 5;
  if (gk_last_error_message(NULL, 0) == 0) return 6;

  gk_state_free(back);
  gk_state_free(pure);
  gk_state_free(rho);
  gk_symmetry_free(g);
  printf("smoke ok: entropy %.6f purity %.6f\n", entropy, purity);
  return 0;
}
