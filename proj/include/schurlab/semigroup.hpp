#pragma once

#include "schurlab/schur.hpp"
#include "schurlab/types.hpp"

#include <cstdint>

namespace schurlab {

// Generator data of the semigroup [exp(-t a_ij)]. Entries are real and
// finite; nonnegativity is a consequence of feasibility, not an invariant.
class CostMatrix {
 public:
  CostMatrix(std::vector<std::string> labels, RealMatrix entries);
  explicit CostMatrix(RealMatrix entries);

  Eigen::Index size() const { return entries_.rows(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const RealMatrix& entries() const { return entries_; }
  double max_abs() const;

 private:
  std::vector<std::string> labels_;
  RealMatrix entries_;
};

// Symbol [exp(-t a_ij)]; t must be nonnegative. At finite index size the
// family T_t is automatically continuous in t in every operator topology,
// so continuity carries no operation here.
SchurSymbol evaluate(const CostMatrix& a, double t);

struct LawCheck {
  bool pass = false;
  double max_deviation = 0.0;
};

// Entrywise |exp(-(s+t)a) - exp(-sa) exp(-ta)| <= residual_tol.
LawCheck semigroup_law_check(const CostMatrix& a, double s, double t,
                             const ToleranceConfig& tol);

// Two families of vectors with a_ij = ||alpha_i - beta_j||^2, one row each.
struct EmbeddingWitness {
  RealMatrix alpha;
  RealMatrix beta;
  double residual = 0.0;
  Eigen::Index dim() const { return alpha.cols(); }
};

struct InfeasibilityCertificate {
  enum class Grade { norm_bound, projection_residual };
  Grade grade = Grade::projection_residual;
  double t_star = 0.0;           // time with certified norm lower bound > 1
  std::optional<NormReport> norm_report;
  double projection_gap = 0.0;   // stalled alternating-projection gap
};

struct SemigroupClassification {
  bool feasible = false;
  std::optional<EmbeddingWitness> witness;
  std::optional<InfeasibilityCertificate> certificate;
};

// Decides existence of alpha_i, beta_j with a_ij = ||alpha_i - beta_j||^2 via
// alternating projections between the PSD cone and the affine slice of Gram
// matrices, then polishes the extracted vectors. Infeasible inputs get a
// certificate: preferably a time t* where [exp(-t* a_ij)] has a certified
// multiplier-norm lower bound > 1, else the stalled projection gap.
SemigroupClassification classify_cost(const CostMatrix& a, const ToleranceConfig& tol,
                                      std::uint64_t seed = 0);

struct VerifyReport {
  bool pass = false;
  double residual = 0.0;
};

// Recomputes all squared distances of the witness against the cost matrix.
VerifyReport verify_embedding(const CostMatrix& a, const EmbeddingWitness& w,
                              const ToleranceConfig& tol);

struct ContractivityScan {
  std::vector<double> t_grid;
  std::vector<NormReport> reports;
  bool all_contractive = false;  // every upper bound <= 1 + residual_tol
};

// factorization_norm(evaluate(a, t)) at every grid point; the independent
// numerical side of the embedding characterization.
ContractivityScan contractivity_scan(const CostMatrix& a, const std::vector<double>& t_grid,
                                     const ToleranceConfig& tol, std::uint64_t seed = 0);

struct BlockDilationReport {
  SchurSymbol symbol;            // 2m x 2m, entries exp(-t ||gamma_u - gamma_v||^2)
  ClassificationResult cp;
  bool unital = false;
  bool selfadjoint = false;
};

// The block trick: stacks gamma = (alpha's then beta's) and forms the
// 2m x 2m Gaussian-kernel symbol, which is a selfadjoint unital completely
// positive multiplier. The witness must verify against a.
BlockDilationReport block_dilation(const CostMatrix& a, const EmbeddingWitness& w, double t,
                                   const ToleranceConfig& tol);

struct ProbeReport {
  enum class Verdict { strictly_below, inconclusive, at_or_above };
  double t = 0.0;
  int n = 1;
  SchattenIndex p;
  Eigen::Index d = 1;
  double lower = 0.0;
  double upper = 0.0;
  double threshold = 2.0;  // 2^n
  Verdict verdict = Verdict::inconclusive;
};

// Bounds ||(Id - T_t)^n|| on the Schatten p-class (blockwise amplified by d)
// against the 2^n analyticity threshold. The map is the multiplier with
// symbol [(1 - exp(-t a_ij))^n]; at p = 2 the value is exactly
// max_ij |1 - exp(-t a_ij)|^n.
ProbeReport beurling_probe(const CostMatrix& a, double t, int n, SchattenIndex p,
                           Eigen::Index d, const ToleranceConfig& tol,
                           std::uint64_t seed = 0);

// One probe per grid point, in grid order.
std::vector<ProbeReport> sector_margin_sweep(const CostMatrix& a,
                                             const std::vector<double>& t_grid, int n,
                                             SchattenIndex p, Eigen::Index d,
                                             const ToleranceConfig& tol,
                                             std::uint64_t seed = 0);

}  // namespace schurlab
