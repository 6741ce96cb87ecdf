#include "detail/ascent.hpp"

#include "detail/linalg.hpp"

#include <cmath>
#include <random>

namespace schurlab::detail {

namespace {

// argmax of Re<G, B> over the unit Schatten-p ball: Hoelder-extremal point
// built from the SVD of G.
ComplexMatrix linear_maximizer(const ComplexMatrix& g, SchattenIndex p) {
  Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const Eigen::Index r = sv.size();
  RealVector d(r);
  if (p.is_infinite()) {
    d.setOnes();
  } else if (p.is(1.0)) {
    d.setZero();
    d(0) = 1.0;
  } else {
    const double q = p.p() / (p.p() - 1.0);
    const double top = sv(0);
    if (top <= 0.0) {
      d.setZero();
      d(0) = 1.0;
    } else {
      double qsum = 0.0;
      for (Eigen::Index k = 0; k < r; ++k) qsum += std::pow(sv(k) / top, q);
      const double denom = top * std::pow(qsum, 1.0 / p.p());
      for (Eigen::Index k = 0; k < r; ++k) {
        d(k) = std::pow(sv(k) / top, q / p.p()) * top / denom;
      }
    }
  }
  return svd.matrixU() * d.asDiagonal() * svd.matrixV().adjoint();
}

// Schatten-p subgradient of ||M||_p at M, scaled to unit dual norm.
ComplexMatrix norm_subgradient(const ComplexMatrix& m, SchattenIndex p) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const Eigen::Index r = sv.size();
  RealVector w = RealVector::Zero(r);
  const double top = sv(0);
  if (top <= 0.0) {
    w(0) = 1.0;
  } else if (p.is_infinite()) {
    w(0) = 1.0;
  } else if (p.is(1.0)) {
    for (Eigen::Index k = 0; k < r; ++k) w(k) = sv(k) > 0.0 ? 1.0 : 0.0;
  } else {
    double psum = 0.0;
    for (Eigen::Index k = 0; k < r; ++k) psum += std::pow(sv(k) / top, p.p());
    const double norm = top * std::pow(psum, 1.0 / p.p());
    for (Eigen::Index k = 0; k < r; ++k) {
      w(k) = std::pow(sv(k) / norm, p.p() - 1.0);
    }
  }
  return svd.matrixU() * w.asDiagonal() * svd.matrixV().adjoint();
}

double p_norm(const ComplexMatrix& m, SchattenIndex p) {
  return schatten_from_singvals(singular_values(m), p);
}

}  // namespace

AscentResult multiplier_norm_lower(const ComplexMatrix& a, SchattenIndex p,
                                   const AscentOptions& opt) {
  const Eigen::Index m = a.rows();
  AscentResult best;
  if (m == 0 || max_abs(a) == 0.0) {
    best.b = ComplexMatrix::Zero(m, a.cols());
    return best;
  }

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // deterministic starts: max-entry indicator, identity pattern, then random
  for (int s = 0; s < opt.starts + 2; ++s) {
    ComplexMatrix b(m, a.cols());
    if (s == 0) {
      Eigen::Index bi = 0, bj = 0;
      a.cwiseAbs().maxCoeff(&bi, &bj);
      b.setZero();
      b(bi, bj) = 1.0;
    } else if (s == 1) {
      b = ComplexMatrix::Identity(m, a.cols());
    } else {
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
          b(i, j) = Complex(gauss(rng), gauss(rng));
        }
      }
    }
    double bn = p_norm(b, p);
    if (bn == 0.0) continue;
    b /= bn;

    double val = p_norm(a.cwiseProduct(b), p);
    for (int it = 0; it < opt.iters; ++it) {
      const ComplexMatrix prod = a.cwiseProduct(b);
      const ComplexMatrix sub = norm_subgradient(prod, p);
      const ComplexMatrix grad = a.conjugate().cwiseProduct(sub);
      const ComplexMatrix target = linear_maximizer(grad, p);

      // full conditional-gradient step, then damped blends if it overshoots
      bool improved = false;
      for (double step : {1.0, 0.5, 0.25, 0.1, 0.03}) {
        ComplexMatrix cand = b + step * (target - b);
        const double cn = p_norm(cand, p);
        if (cn == 0.0) continue;
        cand /= cn;
        const double vnext = p_norm(a.cwiseProduct(cand), p);
        if (vnext > val + 1e-15 * std::max(1.0, val)) {
          b = std::move(cand);
          val = vnext;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (val > best.value) {
      best.value = val;
      best.b = b;
    }
  }
  return best;
}

}  // namespace schurlab::detail
