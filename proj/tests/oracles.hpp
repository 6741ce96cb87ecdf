#pragma once

// Test-side oracles, independent of the library's solver paths.

#include "schurlab/schur.hpp"
#include "schurlab/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace oracles {

using schurlab::Complex;
using schurlab::ComplexMatrix;
using schurlab::ComplexVector;
using schurlab::RealMatrix;

// Brute-force maximum of the CND quadratic form Re(c^H K c) over random
// mean-zero coefficient vectors of unit norm.
inline double cnd_form_max(const ComplexMatrix& k, int trials, std::uint64_t seed) {
  const Eigen::Index m = k.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    ComplexVector c(m);
    for (Eigen::Index i = 0; i < m; ++i) c(i) = Complex(gauss(rng), gauss(rng));
    c.array() -= c.mean();
    const double n = c.norm();
    if (n == 0.0) continue;
    c /= n;
    best = std::max(best, (c.adjoint() * k * c)(0).real());
  }
  return best;
}

inline double sigma_max(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

// Lower-bound oracle for the multiplier operator norm through the scaling
// duality ||M_A|| = sup over unit xi, eta of the nuclear norm of
// diag(conj eta) A diag(xi): random sampling plus annealed local search.
inline double sampling_opnorm_lower(const ComplexMatrix& a, int samples, int anneal,
                                    std::uint64_t seed) {
  const Eigen::Index m = a.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&](ComplexVector& v) {
    for (Eigen::Index i = 0; i < m; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
  };
  auto scaled_nuclear = [&](const ComplexVector& xi, const ComplexVector& eta) {
    const ComplexMatrix scaled = eta.conjugate().asDiagonal() * a * xi.asDiagonal();
    Eigen::JacobiSVD<ComplexMatrix> svd(scaled);
    return svd.singularValues().sum();
  };

  ComplexVector xi(m), eta(m), best_xi(m), best_eta(m);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    random_unit(xi);
    random_unit(eta);
    const double val = scaled_nuclear(xi, eta);
    if (val > best) {
      best = val;
      best_xi = xi;
      best_eta = eta;
    }
  }
  double sigma = 0.4;
  int since_improved = 0;
  for (int it = 0; it < anneal && sigma > 1e-9; ++it) {
    ComplexVector nx = best_xi, ne = best_eta;
    for (Eigen::Index i = 0; i < m; ++i) {
      nx(i) += sigma * Complex(gauss(rng), gauss(rng));
      ne(i) += sigma * Complex(gauss(rng), gauss(rng));
    }
    nx /= nx.norm();
    ne /= ne.norm();
    const double val = scaled_nuclear(nx, ne);
    if (val > best) {
      best = val;
      best_xi = nx;
      best_eta = ne;
      since_improved = 0;
    } else if (++since_improved > 60) {
      sigma *= 0.5;
      since_improved = 0;
    }
  }
  return best;
}

// Upper-bound oracle for the factorization value: alternating least-norm
// interpolation. For fixed rows y_j, each x_i is the least-norm solution of
// <x_i, y_j> = a_ij, and conversely; the value is the balanced product of
// max row norms.
inline double als_factorization_upper(const ComplexMatrix& a, Eigen::Index dim, int starts,
                                      int iters, std::uint64_t seed) {
  const Eigen::Index m = a.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    ComplexMatrix y(m, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) y(i, j) = Complex(gauss(rng), gauss(rng));
    }
    ComplexMatrix x(m, dim);
    for (int it = 0; it < iters; ++it) {
      // conj(X) Y^T = A  <=>  Y X^H = A^T; each half-step is least-norm
      Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cody(y);
      x = cody.solve(ComplexMatrix(a.transpose())).adjoint();
      Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> codx(x.conjugate());
      y = codx.solve(a).transpose();
      double mx = 0.0, my = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) mx = std::max(mx, x.row(i).norm());
      for (Eigen::Index j = 0; j < m; ++j) my = std::max(my, y.row(j).norm());
      const double residual = (x.conjugate() * y.transpose() - a).cwiseAbs().maxCoeff();
      if (residual < 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
        best = std::min(best, mx * my);
      }
    }
  }
  return best;
}

// Absorption left-hand side along a reversed tuple flattening.
inline double absorption_lhs_reversed(const schurlab::BlockElement& x, int n,
                                      schurlab::SchattenIndex p) {
  const Eigen::Index m = x.m;
  Eigen::Index big = x.d;
  for (int k = 0; k < n; ++k) big *= m;
  ComplexMatrix lifted = ComplexMatrix::Zero(big, big);
  auto rep = [&](Eigen::Index i) {
    // little-endian flattening of the constant tuple (i, ..., i)
    Eigen::Index flat = 0, stride = 1;
    for (int k = 0; k < n; ++k) {
      flat += i * stride;
      stride *= m;
    }
    return flat;
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      lifted.block(rep(i) * x.d, rep(j) * x.d, x.d, x.d) = x.block(i, j);
    }
  }
  return schurlab::schatten_norm(lifted, p);
}

}  // namespace oracles
