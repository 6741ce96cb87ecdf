#pragma once

#include "schurlab/types.hpp"

#include <cstdint>

namespace schurlab {

// Symbol matrix A of the entrywise multiplication map B -> [a_ij b_ij].
class SchurSymbol {
 public:
  SchurSymbol(std::vector<std::string> labels, ComplexMatrix entries);
  static SchurSymbol from_real(std::vector<std::string> labels, const RealMatrix& entries);

  Eigen::Index size() const { return entries_.rows(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const ComplexMatrix& entries() const { return entries_; }
  double max_abs() const;
  bool is_real(double tol) const;

 private:
  std::vector<std::string> labels_;
  ComplexMatrix entries_;
};

// [a_ij * b_ij]; shapes must match.
ComplexMatrix entrywise_apply(const SchurSymbol& a, const ComplexMatrix& b);

// (sum sigma_k^p)^(1/p) over singular values; p = inf gives the operator norm.
double schatten_norm(const ComplexMatrix& b, SchattenIndex p);

// Vectors with <x_i, y_j> = a_ij (rows of x and y, conjugate-linear in the
// first slot); value = max_i ||x_i|| * max_j ||y_j||.
struct FactorizationWitness {
  ComplexMatrix x;
  ComplexMatrix y;
  double value = 0.0;

  ComplexMatrix reproduce() const;  // [<x_i, y_j>]
};

struct FactorizationResult {
  double value = 0.0;   // certified upper bound, attained by the witness
  double lower = 0.0;   // certified lower bound
  FactorizationWitness witness;
  std::optional<ComplexMatrix> lower_witness;  // test matrix attaining lower
  bool converged = false;                      // upper - lower closed within tol
};

// min over factorizations a_ij = <x_i, y_j> of max||x_i|| * max||y_j||, equal
// to the (completely bounded) operator norm of M_A on the full matrix algebra.
FactorizationResult factorization_norm(const SchurSymbol& a, const ToleranceConfig& tol,
                                       std::uint64_t seed = 0);

// Norm of M_A on the Schatten p-class. p = 2 is exact (max |a_ij|); p in
// {1, inf} equals the factorization norm; other p get a certified interval.
NormReport schur_p_norm(const SchurSymbol& a, SchattenIndex p, const ToleranceConfig& tol,
                        std::uint64_t seed = 0);

// Complete positivity: the symbol matrix is PSD within eig_tol.
ClassificationResult classify_cp(const SchurSymbol& a, const ToleranceConfig& tol);

// Selfadjointness: the symbol matrix is real within eig_tol.
ClassificationResult classify_selfadjoint(const SchurSymbol& a, const ToleranceConfig& tol);

// Symbol of (M_A)^{tensor n} on the n-fold product index set.
SchurSymbol tensor_power_symbol(const SchurSymbol& a, int n, Eigen::Index size_cap = 4096);

// Element x of M_I(M_d): an (m*d) x (m*d) block matrix, blocks x_ij in M_d.
struct BlockElement {
  BlockElement(Eigen::Index m, Eigen::Index d, ComplexMatrix entries);
  Eigen::Index m = 0;
  Eigen::Index d = 0;
  ComplexMatrix entries;

  ComplexMatrix block(Eigen::Index i, Eigen::Index j) const;
};

struct AbsorptionReport {
  double lhs = 0.0;  // || sum e_ij x ... x e_ij x x_ij ||_p on the n-fold space
  double rhs = 0.0;  // || sum e_ij x x_ij ||_p
  double diff = 0.0;
};

// Both sides of the absorption identity, computed as plain Schatten norms of
// explicit matrices.
AbsorptionReport absorption_check(const BlockElement& x, int n, SchattenIndex p,
                                  Eigen::Index size_cap = 4096);

struct MultiplierPowerReport {
  NormReport small_side;     // bounds for ||M_{[a_ij^n]}||_p
  double base_upper = 0.0;   // certified factorization value of A
  double big_upper = 0.0;    // base_upper^n, bounds ||(M_A)^{tensor n}||_p
  double small_lower = 0.0;  // certified lower bound of the small side
  double slack = 0.0;        // big_upper - small_lower, expected >= 0
};

// Companion inequality: the n-fold composition (symbol [a_ij^n]) is dominated
// by the n-fold tensor power, checked through certified bounds on both sides.
MultiplierPowerReport absorption_multiplier_check(const SchurSymbol& a, int n, SchattenIndex p,
                                                  const ToleranceConfig& tol,
                                                  std::uint64_t seed = 0);

}  // namespace schurlab
