#pragma once

#include "schurlab/schur.hpp"
#include "schurlab/semigroup.hpp"
#include "schurlab/types.hpp"

#include <cstdint>

namespace schurlab {

// Fourier multiplier symbol phi on the cyclic group Z_N.
struct CyclicMultiplier {
  CyclicMultiplier(int n, ComplexVector values);
  int N = 1;
  ComplexVector phi;
};

// The transferred Schur symbol phi((g - h) mod N); constant along wrapped
// diagonals.
struct ToeplitzSymbol {
  SchurSymbol symbol;
};

ToeplitzSymbol check_symbol(const CyclicMultiplier& mult);

struct PowerIdentityReport {
  bool pass = false;
  double max_deviation = 0.0;
};

// Entrywise n-th power of the Toeplitz symbol against the Toeplitz symbol of
// the pointwise power phi^n.
PowerIdentityReport power_identity_check(const CyclicMultiplier& mult, int n,
                                         const ToleranceConfig& tol);

// Norm of the multiplier after the discrete Fourier identification: a
// circulant convolution operator on L^p of Z_N with normalized counting
// measure. p = 2 gives max |phi|; p in {1, inf} the L^1 norm of the
// convolution kernel; other p a certified interval.
NormReport fourier_lp_norm(const CyclicMultiplier& mult, SchattenIndex p,
                           std::uint64_t seed = 0);

struct TransferReport {
  enum class Outcome { pass, fail, inconclusive };
  NormReport lhs;  // Fourier side
  NormReport rhs;  // Schur side
  double slack = 0.0;
  Outcome outcome = Outcome::inconclusive;
};

// Scalar transference: the Fourier-side norm is dominated by the norm of the
// transferred Schur multiplier. Certified at p in {1, 2, inf}; other p run in
// interval mode and may be inconclusive.
TransferReport transfer_check(const CyclicMultiplier& mult, SchattenIndex p,
                              const ToleranceConfig& tol, std::uint64_t seed = 0);

// Builds the transferred cost matrix a(g,h) = psi((g - h) mod N) and decides
// whether [exp(-t psi(g-h))] is a contractive semigroup.
SemigroupClassification fourier_semigroup_bridge(const RealVector& psi,
                                                 const ToleranceConfig& tol,
                                                 std::uint64_t seed = 0);

}  // namespace schurlab
