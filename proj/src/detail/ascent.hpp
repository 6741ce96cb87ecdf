#pragma once

#include "schurlab/types.hpp"

#include <cstdint>

namespace schurlab::detail {

struct AscentOptions {
  int starts = 8;
  int iters = 200;
  std::uint64_t seed = 0;
};

struct AscentResult {
  double value = 0.0;
  ComplexMatrix b;  // unit p-norm test matrix attaining value
};

// Lower bound for ||M_A : S^p -> S^p|| by conditional-gradient ascent of
// ||A o B||_p over the unit ball, from seeded random starts. Any returned
// pair (value, B) is a certificate: value = ||A o B||_p / ||B||_p.
AscentResult multiplier_norm_lower(const ComplexMatrix& a, SchattenIndex p,
                                   const AscentOptions& opt);

}  // namespace schurlab::detail
