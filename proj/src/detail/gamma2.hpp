#pragma once

#include "schurlab/types.hpp"

namespace schurlab::detail {

struct Gamma2Options {
  double rel_gap = 1e-8;   // target barrier gap relative to max(1, t)
  int max_newton = 800;    // global Newton step cap
  int stage_newton = 60;   // per-centering cap
  double eta0 = 1.0;
  double eta_mult = 8.0;
};

struct Gamma2Solution {
  RealMatrix p;
  RealMatrix q;
  double t = 0.0;
  bool converged = false;
  int newton_steps = 0;
};

// Log-barrier Newton solver for
//   min t   s.t.  [[P, A], [A^T, Q]] PSD,  P_ii <= t,  Q_jj <= t,
// over symmetric P, Q. The off-diagonal block is pinned to A by the
// parametrization, so any iterate yields an exact factorization witness.
Gamma2Solution gamma2_sdp_real(const RealMatrix& a, const Gamma2Options& opt);

}  // namespace schurlab::detail
