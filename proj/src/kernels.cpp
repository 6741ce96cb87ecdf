#include "schurlab/kernels.hpp"

#include "detail/linalg.hpp"

#include <cmath>
#include <utility>

namespace schurlab {

namespace {

std::vector<std::string> default_labels(Eigen::Index m) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

Kernel::Kernel(std::vector<std::string> points, ComplexMatrix values)
    : points_(std::move(points)), values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() < 1) {
    throw ShapeError("kernel matrix must be square");
  }
  if (points_.empty()) points_ = default_labels(values_.rows());
  if (static_cast<Eigen::Index>(points_.size()) != values_.rows()) {
    throw ShapeError("kernel point list does not match matrix size");
  }
  if (!detail::all_finite(values_)) {
    throw ShapeError("kernel entries must be finite");
  }
}

Kernel Kernel::from_real(std::vector<std::string> points, const RealMatrix& values) {
  return Kernel(std::move(points), values.cast<Complex>());
}

double Kernel::max_abs() const { return detail::max_abs(values_); }

ClassificationResult is_hermitian(const Kernel& k, const ToleranceConfig& tol) {
  tol.validate();
  const double dev = detail::hermitian_deviation(k.values());
  ClassificationResult res;
  res.yes = dev <= tol.eig_tol;
  res.margin = -dev;
  return res;
}

ClassificationResult classify_pd(const Kernel& k, const ToleranceConfig& tol) {
  tol.validate();
  if (!is_hermitian(k, tol).yes) {
    throw PreconditionError("classify_pd requires a hermitian kernel");
  }
  detail::EigExtreme lo = detail::min_eig_hermitian(k.values());
  ClassificationResult res;
  res.yes = lo.value >= -tol.eig_tol;
  res.margin = lo.value;
  if (!res.yes) res.witness = lo.vector;
  return res;
}

ClassificationResult classify_cnd(const Kernel& k, const ToleranceConfig& tol) {
  tol.validate();
  const double dev = detail::hermitian_deviation(k.values());
  if (dev > tol.eig_tol) {
    ClassificationResult res;
    res.yes = false;
    res.margin = -dev;
    return res;
  }
  const Eigen::Index m = k.size();
  ClassificationResult res;
  if (m <= 1) {
    res.yes = true;
    res.margin = 0.0;
    return res;
  }
  // compress the quadratic form to the mean-zero subspace
  const RealMatrix q = detail::helmert_basis(m);
  const ComplexMatrix qc = q.cast<Complex>();
  const ComplexMatrix compressed = qc.adjoint() * detail::hermitian_part(k.values()) * qc;
  detail::EigExtreme hi = detail::max_eig_hermitian(compressed);
  res.yes = hi.value <= tol.eig_tol;
  res.margin = -hi.value;
  if (!res.yes) res.witness = qc * hi.vector;  // mean-zero maximizer
  return res;
}

CndEmbedding cnd_embedding(const Kernel& k, const ToleranceConfig& tol) {
  tol.validate();
  const Eigen::Index m = k.size();
  if (detail::max_abs_imag(k.values()) > tol.eig_tol ||
      detail::hermitian_deviation(k.values()) > tol.eig_tol) {
    throw EmbeddingInfeasibleError("cnd_embedding requires a real symmetric kernel");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(k.values()(i, i)) > tol.residual_tol) {
      throw EmbeddingInfeasibleError("cnd_embedding requires a kernel vanishing on the diagonal");
    }
  }
  ClassificationResult cnd = classify_cnd(k, tol);
  if (!cnd.yes) {
    throw EmbeddingInfeasibleError("kernel is not conditionally negative definite",
                                   cnd.witness);
  }

  const RealMatrix kr = k.values().real();
  const RealMatrix j = RealMatrix::Identity(m, m) - RealMatrix::Constant(m, m, 1.0 / m);
  const RealMatrix gram = -0.5 * j * kr * j;
  RealMatrix xi = detail::psd_sqrt_rows(gram, tol.eig_tol);

  double residual = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index jj = 0; jj < m; ++jj) {
      const double d2 = (xi.row(i) - xi.row(jj)).squaredNorm();
      residual = std::max(residual, std::abs(d2 - kr(i, jj)));
    }
  }
  if (residual > tol.residual_tol) {
    throw EmbeddingInfeasibleError("embedding reconstruction residual exceeds tolerance",
                                   cnd.witness);
  }

  CndEmbedding out;
  out.points = k.points();
  out.xi = std::move(xi);
  out.residual = residual;
  return out;
}

SchoenbergScan schoenberg_scan(const Kernel& k, const std::vector<double>& t_grid,
                               const ToleranceConfig& tol) {
  tol.validate();
  for (double t : t_grid) {
    if (t < 0.0 || std::isnan(t)) throw InputError("schoenberg_scan grid must be nonnegative");
  }
  if (detail::max_abs_imag(k.values()) > tol.eig_tol ||
      detail::hermitian_deviation(k.values()) > tol.eig_tol) {
    throw PreconditionError("schoenberg_scan requires a real symmetric kernel");
  }
  const RealMatrix kr = k.values().real();
  const double growth = std::max(0.0, -kr.minCoeff());
  SchoenbergScan scan;
  scan.t_grid = t_grid;
  scan.pd_for_all = true;
  for (double t : t_grid) {
    if (t * growth > 700.0) {
      throw InputError("schoenberg_scan: entrywise exponential overflows at the sampled time");
    }
    const RealMatrix mt = (-t * kr).unaryExpr([](double v) { return std::exp(v); });
    Kernel kt(k.points(), mt.cast<Complex>());
    ClassificationResult r = classify_pd(kt, tol);
    scan.pd_for_all = scan.pd_for_all && r.yes;
    scan.per_t.push_back(std::move(r));
  }
  return scan;
}

}  // namespace schurlab
