#pragma once

#include "schurlab/types.hpp"

namespace schurlab {

// A kernel on a finite point set: values(i,j) = psi(points[i], points[j]).
class Kernel {
 public:
  Kernel(std::vector<std::string> points, ComplexMatrix values);
  static Kernel from_real(std::vector<std::string> points, const RealMatrix& values);

  Eigen::Index size() const { return values_.rows(); }
  const std::vector<std::string>& points() const { return points_; }
  const ComplexMatrix& values() const { return values_; }
  double max_abs() const;

 private:
  std::vector<std::string> points_;
  ComplexMatrix values_;
};

// yes iff max_{i,j} |psi(x_j,x_i) - conj(psi(x_i,x_j))| <= eig_tol;
// margin is that deviation negated.
ClassificationResult is_hermitian(const Kernel& k, const ToleranceConfig& tol);

// Positive definiteness of the full matrix (finite point set, so the full
// matrix covers every finite subset). Throws PreconditionError if the kernel
// is not hermitian within tol.
ClassificationResult classify_pd(const Kernel& k, const ToleranceConfig& tol);

// Conditional negative definiteness: hermitian and the quadratic form is
// <= eig_tol on mean-zero coefficient vectors. margin is the negated largest
// eigenvalue of the compression to the mean-zero subspace.
ClassificationResult classify_cnd(const Kernel& k, const ToleranceConfig& tol);

// Vectors xi with ||xi(x_i) - xi(x_j)||^2 = psi(x_i,x_j), one row per point.
struct CndEmbedding {
  std::vector<std::string> points;
  RealMatrix xi;
  double residual = 0.0;
  Eigen::Index dim() const { return xi.cols(); }
};

// Requires a real symmetric CND kernel vanishing on the diagonal; throws
// EmbeddingInfeasibleError (carrying the CND witness) otherwise.
// Construction: G = -1/2 J K J with J = I - (1/m) ones, eigenvalues below
// eig_tol clipped to zero, embedding rows from the PSD square root.
CndEmbedding cnd_embedding(const Kernel& k, const ToleranceConfig& tol);

struct SchoenbergScan {
  std::vector<double> t_grid;
  std::vector<ClassificationResult> per_t;
  bool pd_for_all = false;
};

// Per-t positive definiteness of [exp(-t psi(x_i,x_j))]. Requires a real
// symmetric kernel; negative t entries are rejected.
SchoenbergScan schoenberg_scan(const Kernel& k, const std::vector<double>& t_grid,
                               const ToleranceConfig& tol);

}  // namespace schurlab
