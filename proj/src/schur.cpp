#include "schurlab/schur.hpp"

#include "detail/ascent.hpp"
#include "detail/gamma2.hpp"
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

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  ComplexMatrix x;
  ComplexMatrix y;
};

double witness_residual(const ComplexMatrix& x, const ComplexMatrix& y,
                        const ComplexMatrix& a) {
  return detail::max_abs(ComplexMatrix(x.conjugate() * y.transpose() - a));
}

void consider(Candidate& best, ComplexMatrix x, ComplexMatrix y, const ComplexMatrix& a,
              double residual_tol) {
  if (witness_residual(x, y, a) > residual_tol) return;
  double mx = 0.0, my = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) mx = std::max(mx, x.row(i).norm());
  for (Eigen::Index j = 0; j < y.rows(); ++j) my = std::max(my, y.row(j).norm());
  const double value = mx * my;
  if (value < best.value) {
    best.value = value;
    best.x = std::move(x);
    best.y = std::move(y);
  }
}

// Realification of a complex matrix as a 2x2 real block structure.
RealMatrix realify(const ComplexMatrix& a) {
  const Eigen::Index m = a.rows(), n = a.cols();
  RealMatrix out(2 * m, 2 * n);
  out.block(0, 0, m, n) = a.real();
  out.block(0, n, m, n) = -a.imag();
  out.block(m, 0, m, n) = a.imag();
  out.block(m, n, m, n) = a.real();
  return out;
}

// Inverse of realify after symmetrizing with the complex-structure rotation.
ComplexMatrix unrealify_averaged(const RealMatrix& p) {
  const Eigen::Index m = p.rows() / 2;
  RealMatrix j = RealMatrix::Zero(2 * m, 2 * m);
  j.block(0, m, m, m) = -RealMatrix::Identity(m, m);
  j.block(m, 0, m, m) = RealMatrix::Identity(m, m);
  const RealMatrix avg = 0.5 * (p + j.transpose() * p * j);
  ComplexMatrix out = avg.block(0, 0, m, m).cast<Complex>() +
                      Complex(0, 1) * avg.block(m, 0, m, m).cast<Complex>();
  return 0.5 * (out + out.adjoint());
}

}  // namespace

SchurSymbol::SchurSymbol(std::vector<std::string> labels, ComplexMatrix entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw ShapeError("symbol matrix must be square");
  }
  if (labels_.empty()) labels_ = default_labels(entries_.rows());
  if (static_cast<Eigen::Index>(labels_.size()) != entries_.rows()) {
    throw ShapeError("symbol label list does not match matrix size");
  }
  if (!detail::all_finite(entries_)) {
    throw ShapeError("symbol entries must be finite");
  }
}

SchurSymbol SchurSymbol::from_real(std::vector<std::string> labels, const RealMatrix& entries) {
  return SchurSymbol(std::move(labels), entries.cast<Complex>());
}

double SchurSymbol::max_abs() const { return detail::max_abs(entries_); }

bool SchurSymbol::is_real(double tol) const {
  return detail::max_abs_imag(entries_) <= tol;
}

ComplexMatrix entrywise_apply(const SchurSymbol& a, const ComplexMatrix& b) {
  if (b.rows() != a.size() || b.cols() != a.size()) {
    throw ShapeError("entrywise_apply shape mismatch");
  }
  return a.entries().cwiseProduct(b);
}

double schatten_norm(const ComplexMatrix& b, SchattenIndex p) {
  if (!detail::all_finite(b)) throw ShapeError("schatten_norm requires finite entries");
  return detail::schatten_from_singvals(detail::singular_values(b), p);
}

ComplexMatrix FactorizationWitness::reproduce() const {
  return x.conjugate() * y.transpose();
}

FactorizationResult factorization_norm(const SchurSymbol& a, const ToleranceConfig& tol,
                                       std::uint64_t seed) {
  tol.validate();
  const Eigen::Index m = a.size();
  const ComplexMatrix& av = a.entries();
  const double scale = a.max_abs();

  FactorizationResult out;
  if (scale == 0.0) {
    out.witness.x = ComplexMatrix::Zero(m, 1);
    out.witness.y = ComplexMatrix::Zero(m, 1);
    out.converged = true;
    return out;
  }

  // certified lower bounds: max entry, then a light ascent over test matrices
  double lower = scale;
  {
    Eigen::Index bi = 0, bj = 0;
    av.cwiseAbs().maxCoeff(&bi, &bj);
    ComplexMatrix unit = ComplexMatrix::Zero(m, m);
    unit(bi, bj) = 1.0;
    out.lower_witness = std::move(unit);
  }
  detail::AscentOptions aopt;
  aopt.seed = seed;
  aopt.starts = 4;
  aopt.iters = 60;
  detail::AscentResult asc = detail::multiplier_norm_lower(av, SchattenIndex::infinity(), aopt);
  if (asc.value > lower) {
    lower = asc.value;
    out.lower_witness = asc.b;
  }
  out.lower = lower;

  // cheap certified factorizations
  Candidate best;
  const double wtol = std::max(tol.residual_tol, 1e-12 * scale);
  consider(best, av.conjugate(), ComplexMatrix::Identity(m, m), av, wtol);
  consider(best, ComplexMatrix::Identity(m, m), av.transpose(), av, wtol);
  {
    Eigen::JacobiSVD<ComplexMatrix> svd(av, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const ComplexMatrix half = svd.singularValues().cwiseSqrt().cast<Complex>().asDiagonal();
    consider(best, ComplexMatrix((svd.matrixU() * half).conjugate()),
             ComplexMatrix(svd.matrixV().conjugate() * half), av, wtol);
  }
  if (detail::hermitian_deviation(av) <= wtol) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(detail::hermitian_part(av));
    if (es.eigenvalues()(0) >= -tol.eig_tol) {
      const ComplexMatrix w =
          es.eigenvectors() *
          es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal();
      consider(best, w.conjugate(), w.conjugate(), av, wtol);
    }
  }

  const double gap_target = std::max(1e-12, tol.residual_tol) * std::max(1.0, lower);
  if (best.value - lower > gap_target) {
    // interior-point solve of the block-PSD diagonal-minimization problem
    detail::Gamma2Options gopt;
    gopt.rel_gap = 1e-9;
    gopt.max_newton = std::max(tol.max_iter, 200);
    if (a.is_real(0.0)) {
      detail::Gamma2Solution sol = detail::gamma2_sdp_real(av.real(), gopt);
      const Eigen::Index nn = 2 * m;
      RealMatrix z(nn, nn);
      z.block(0, 0, m, m) = sol.p;
      z.block(0, m, m, m) = av.real();
      z.block(m, 0, m, m) = av.real().transpose();
      z.block(m, m, m, m) = sol.q;
      const ComplexMatrix s = detail::psd_sqrt_columns(z.cast<Complex>());
      consider(best, ComplexMatrix(s.leftCols(m).transpose()),
               ComplexMatrix(s.rightCols(m).transpose()), av, wtol);
    } else {
      detail::Gamma2Solution sol = detail::gamma2_sdp_real(realify(av), gopt);
      const ComplexMatrix pc = unrealify_averaged(sol.p);
      const ComplexMatrix qc = unrealify_averaged(sol.q);
      const Eigen::Index nn = 2 * m;
      ComplexMatrix z(nn, nn);
      z.block(0, 0, m, m) = pc;
      z.block(0, m, m, m) = av;
      z.block(m, 0, m, m) = av.adjoint();
      z.block(m, m, m, m) = qc;
      const ComplexMatrix s = detail::psd_sqrt_columns(z);
      consider(best, ComplexMatrix(s.leftCols(m).transpose()),
               ComplexMatrix(s.rightCols(m).transpose()), av, wtol);
    }
  }

  out.value = best.value;
  out.witness.x = std::move(best.x);
  out.witness.y = std::move(best.y);
  out.witness.value = out.value;
  out.converged = (out.value - out.lower) <= gap_target;
  return out;
}

NormReport schur_p_norm(const SchurSymbol& a, SchattenIndex p, const ToleranceConfig& tol,
                        std::uint64_t seed) {
  tol.validate();
  NormReport report;
  report.p = p;
  const double scale = a.max_abs();

  if (p.is(2.0)) {
    // Hilbert-Schmidt class: the multiplier acts diagonally on matrix units
    report.lower = scale;
    report.upper = scale;
    report.exact = true;
    Eigen::Index bi = 0, bj = 0;
    if (a.size() > 0) a.entries().cwiseAbs().maxCoeff(&bi, &bj);
    ComplexMatrix b = ComplexMatrix::Zero(a.size(), a.size());
    if (a.size() > 0) b(bi, bj) = 1.0;
    report.lower_witness = b;
    return report;
  }

  auto unit_at_max = [&a] {
    Eigen::Index bi = 0, bj = 0;
    if (a.size() > 0) a.entries().cwiseAbs().maxCoeff(&bi, &bj);
    ComplexMatrix b = ComplexMatrix::Zero(a.size(), a.size());
    if (a.size() > 0) b(bi, bj) = 1.0;
    return b;
  };

  if (p.is(1.0)) {
    // trace duality: the adjoint multiplier has the transposed symbol
    SchurSymbol at(a.labels(), a.entries().transpose());
    FactorizationResult fact = factorization_norm(at, tol, seed);
    detail::AscentOptions aopt;
    aopt.seed = seed;
    detail::AscentResult direct = detail::multiplier_norm_lower(a.entries(), p, aopt);
    report.lower = std::max({scale, fact.lower, direct.value});
    report.upper = fact.value;
    if (direct.value >= report.lower) {
      report.lower_witness = direct.b;
    } else if (scale >= report.lower) {
      report.lower_witness = unit_at_max();
    }
    report.exact = (report.upper - report.lower) <=
                   std::max(1e-12, tol.residual_tol) * std::max(1.0, report.upper);
    return report;
  }

  if (p.is_infinite()) {
    FactorizationResult fact = factorization_norm(a, tol, seed);
    detail::AscentOptions aopt;
    aopt.seed = seed;
    detail::AscentResult direct = detail::multiplier_norm_lower(a.entries(), p, aopt);
    if (direct.value >= fact.lower) {
      report.lower = direct.value;
      report.lower_witness = direct.b;
    } else {
      report.lower = fact.lower;
      report.lower_witness = fact.lower_witness;
    }
    report.upper = fact.value;
    report.exact = (report.upper - report.lower) <=
                   std::max(1e-12, tol.residual_tol) * std::max(1.0, report.upper);
    return report;
  }

  // interpolation between the trace-class and operator-norm endpoints gives
  // the factorization value as an upper bound at every p
  FactorizationResult fact = factorization_norm(a, tol, seed);
  detail::AscentOptions aopt;
  aopt.seed = seed;
  detail::AscentResult asc = detail::multiplier_norm_lower(a.entries(), p, aopt);
  if (asc.value >= scale) {
    report.lower = asc.value;
    report.lower_witness = asc.b;
  } else {
    report.lower = scale;
    report.lower_witness = unit_at_max();
  }
  report.upper = fact.value;
  report.exact = (report.upper - report.lower) <=
                 std::max(1e-12, tol.residual_tol) * std::max(1.0, report.upper);
  return report;
}

ClassificationResult classify_cp(const SchurSymbol& a, const ToleranceConfig& tol) {
  tol.validate();
  const double dev = detail::hermitian_deviation(a.entries());
  if (dev > tol.eig_tol) {
    ClassificationResult res;
    res.yes = false;
    res.margin = -dev;
    return res;
  }
  detail::EigExtreme lo = detail::min_eig_hermitian(a.entries());
  ClassificationResult res;
  res.yes = lo.value >= -tol.eig_tol;
  res.margin = lo.value;
  if (!res.yes) res.witness = lo.vector;
  return res;
}

ClassificationResult classify_selfadjoint(const SchurSymbol& a, const ToleranceConfig& tol) {
  tol.validate();
  const double im = detail::max_abs_imag(a.entries());
  ClassificationResult res;
  res.yes = im <= tol.eig_tol;
  res.margin = -im;
  return res;
}

SchurSymbol tensor_power_symbol(const SchurSymbol& a, int n, Eigen::Index size_cap) {
  if (n < 1) throw InputError("tensor_power_symbol requires n >= 1");
  const Eigen::Index m = a.size();
  double total = 1.0;
  for (int k = 0; k < n; ++k) {
    total *= static_cast<double>(m);
    if (total > static_cast<double>(size_cap)) {
      throw ResourceLimitError("tensor power exceeds the configured size cap");
    }
  }
  ComplexMatrix out = a.entries();
  std::vector<std::string> labels = a.labels();
  for (int k = 1; k < n; ++k) {
    out = detail::kron(out, a.entries());
    std::vector<std::string> next;
    next.reserve(labels.size() * a.labels().size());
    for (const std::string& l : labels) {
      for (const std::string& r : a.labels()) next.push_back(l + "." + r);
    }
    labels = std::move(next);
  }
  return SchurSymbol(std::move(labels), std::move(out));
}

BlockElement::BlockElement(Eigen::Index m_, Eigen::Index d_, ComplexMatrix entries_)
    : m(m_), d(d_), entries(std::move(entries_)) {
  if (m < 1 || d < 1) throw InputError("block element requires m >= 1 and d >= 1");
  if (entries.rows() != m * d || entries.cols() != m * d) {
    throw ShapeError("block element matrix must be (m*d) x (m*d)");
  }
  if (!detail::all_finite(entries)) {
    throw ShapeError("block element entries must be finite");
  }
}

ComplexMatrix BlockElement::block(Eigen::Index i, Eigen::Index j) const {
  return entries.block(i * d, j * d, d, d);
}

AbsorptionReport absorption_check(const BlockElement& x, int n, SchattenIndex p,
                                  Eigen::Index size_cap) {
  if (n < 1) throw InputError("absorption_check requires n >= 1");
  const Eigen::Index m = x.m;
  double total = static_cast<double>(x.d);
  for (int k = 0; k < n; ++k) {
    total *= static_cast<double>(m);
    if (total > static_cast<double>(size_cap)) {
      throw ResourceLimitError("absorption check exceeds the configured size cap");
    }
  }
  const Eigen::Index big = static_cast<Eigen::Index>(total);

  // the n-fold matrix units are supported on constant index tuples
  ComplexMatrix lifted = ComplexMatrix::Zero(big, big);
  auto rep = [&](Eigen::Index i) {
    Eigen::Index flat = 0;
    for (int k = 0; k < n; ++k) flat = flat * m + i;
    return flat;
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      lifted.block(rep(i) * x.d, rep(j) * x.d, x.d, x.d) = x.block(i, j);
    }
  }

  AbsorptionReport rep_out;
  rep_out.lhs = schatten_norm(lifted, p);
  rep_out.rhs = schatten_norm(x.entries, p);
  rep_out.diff = std::abs(rep_out.lhs - rep_out.rhs);
  return rep_out;
}

MultiplierPowerReport absorption_multiplier_check(const SchurSymbol& a, int n, SchattenIndex p,
                                                  const ToleranceConfig& tol,
                                                  std::uint64_t seed) {
  if (n < 1) throw InputError("absorption_multiplier_check requires n >= 1");
  ComplexMatrix powered = ComplexMatrix::Ones(a.size(), a.size());
  for (int k = 0; k < n; ++k) powered = powered.cwiseProduct(a.entries());

  MultiplierPowerReport rep;
  rep.small_side = schur_p_norm(SchurSymbol(a.labels(), powered), p, tol, seed);
  rep.small_lower = rep.small_side.lower;

  // the n-fold tensor power factorizes through the tensor of any base
  // factorization, so the base value to the n-th power is a certified bound
  FactorizationResult base = factorization_norm(a, tol, seed);
  rep.base_upper = base.value;
  rep.big_upper = std::pow(base.value, n);
  rep.slack = rep.big_upper - rep.small_lower;
  return rep;
}

}  // namespace schurlab
