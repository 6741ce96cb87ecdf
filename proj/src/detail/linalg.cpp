#include "detail/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace schurlab::detail {

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double max_abs(const RealMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double max_abs_imag(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.imag().cwiseAbs().maxCoeff();
}

double hermitian_deviation(const ComplexMatrix& m) {
  double dev = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      dev = std::max(dev, std::abs(m(j, i) - std::conj(m(i, j))));
    }
  }
  return dev;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

bool all_finite(const RealMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j))) return false;
    }
  }
  return true;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

RealMatrix helmert_basis(Eigen::Index m) {
  RealMatrix q = RealMatrix::Zero(m, m > 0 ? m - 1 : 0);
  for (Eigen::Index k = 1; k < m; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (Eigen::Index i = 0; i < k; ++i) q(i, k - 1) = scale;
    q(k, k - 1) = -static_cast<double>(k) * scale;
  }
  return q;
}

EigExtreme min_eig_hermitian(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  EigExtreme out;
  out.value = es.eigenvalues()(0);
  out.vector = es.eigenvectors().col(0);
  return out;
}

EigExtreme max_eig_hermitian(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  const Eigen::Index last = m.rows() - 1;
  EigExtreme out;
  out.value = es.eigenvalues()(last);
  out.vector = es.eigenvectors().col(last);
  return out;
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double schatten_from_singvals(const RealVector& sv, SchattenIndex p) {
  if (sv.size() == 0) return 0.0;
  const double top = sv(0);
  if (p.is_infinite() || top == 0.0) return top;
  if (p.is(1.0)) return sv.sum();
  if (p.is(2.0)) return sv.norm();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    acc += std::pow(sv(k) / top, p.p());
  }
  return top * std::pow(acc, 1.0 / p.p());
}

RealMatrix psd_project(const RealMatrix& s) {
  RealMatrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym);
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

RealMatrix psd_sqrt_rows(const RealMatrix& s, double clip_tol) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (s + s.transpose()));
  const RealVector& ev = es.eigenvalues();
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > clip_tol) ++r;
  }
  RealMatrix rows(s.rows(), r);
  Eigen::Index c = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > clip_tol) {
      rows.col(c++) = es.eigenvectors().col(k) * std::sqrt(ev(k));
    }
  }
  return rows;
}

ComplexMatrix psd_sqrt_columns(const ComplexMatrix& z) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(z));
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace schurlab::detail
