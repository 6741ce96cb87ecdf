#include "schurlab/transference.hpp"

#include "detail/linalg.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace schurlab {

namespace {

// convolution kernel k with k-hat = phi under the normalized-trace pairing
ComplexVector convolution_kernel(const CyclicMultiplier& mult) {
  const int n = mult.N;
  ComplexVector k(n);
  for (int u = 0; u < n; ++u) {
    Complex acc = 0.0;
    for (int g = 0; g < n; ++g) {
      const double angle = 2.0 * std::numbers::pi * g * u / n;
      acc += mult.phi(g) * Complex(std::cos(angle), std::sin(angle));
    }
    k(u) = acc;
  }
  return k;
}

double kernel_l1_norm(const CyclicMultiplier& mult) {
  const ComplexVector k = convolution_kernel(mult);
  double acc = 0.0;
  for (Eigen::Index u = 0; u < k.size(); ++u) acc += std::abs(k(u));
  return acc / mult.N;
}

double vector_p_norm(const ComplexVector& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  double top = v.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v(i)) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

// ascent lower bound for the convolution operator on l^p vectors
double convolution_lower(const CyclicMultiplier& mult, double p, std::uint64_t seed) {
  const int n = mult.N;
  const ComplexVector k = convolution_kernel(mult);
  ComplexMatrix c(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      c(x, y) = k(((x - y) % n + n) % n) / static_cast<double>(n);
    }
  }
  const double q = p / (p - 1.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  for (int s = 0; s < 6; ++s) {
    ComplexVector f(n);
    if (s == 0) {
      f.setOnes();
    } else {
      for (int i = 0; i < n; ++i) f(i) = Complex(gauss(rng), gauss(rng));
    }
    double fn = vector_p_norm(f, p);
    if (fn == 0.0) continue;
    f /= fn;
    double val = vector_p_norm(c * f, p);
    for (int it = 0; it < 60; ++it) {
      const ComplexVector g = c * f;
      const double gn = vector_p_norm(g, p);
      if (gn == 0.0) break;
      ComplexVector sub(n);
      for (int i = 0; i < n; ++i) {
        const double mag = std::abs(g(i));
        sub(i) = mag > 0.0 ? std::pow(mag / gn, p - 1.0) * g(i) / mag : 0.0;
      }
      const ComplexVector grad = c.adjoint() * sub;
      ComplexVector fnext(n);
      double top = grad.cwiseAbs().maxCoeff();
      if (top == 0.0) break;
      for (int i = 0; i < n; ++i) {
        const double mag = std::abs(grad(i));
        fnext(i) = mag > 0.0 ? std::pow(mag / top, q / p) * grad(i) / mag : 0.0;
      }
      fnext /= vector_p_norm(fnext, p);
      const double vnext = vector_p_norm(c * fnext, p);
      if (vnext <= val + 1e-14 * std::max(1.0, val)) break;
      f = fnext;
      val = vnext;
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace

CyclicMultiplier::CyclicMultiplier(int n, ComplexVector values)
    : N(n), phi(std::move(values)) {
  if (N < 1) throw InputError("cyclic group order must be at least 1");
  if (phi.size() != N) throw ShapeError("phi must have length N");
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (!std::isfinite(phi(i).real()) || !std::isfinite(phi(i).imag())) {
      throw ShapeError("phi entries must be finite");
    }
  }
}

ToeplitzSymbol check_symbol(const CyclicMultiplier& mult) {
  const int n = mult.N;
  ComplexMatrix sym(n, n);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      sym(g, h) = mult.phi(((g - h) % n + n) % n);
    }
  }
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) labels.push_back(std::to_string(g));
  return ToeplitzSymbol{SchurSymbol(std::move(labels), std::move(sym))};
}

PowerIdentityReport power_identity_check(const CyclicMultiplier& mult, int n,
                                         const ToleranceConfig& tol) {
  if (n < 0) throw InputError("power_identity_check requires n >= 0");
  const ComplexMatrix sym = check_symbol(mult).symbol.entries();

  ComplexMatrix lhs = ComplexMatrix::Ones(mult.N, mult.N);
  for (int k = 0; k < n; ++k) lhs = lhs.cwiseProduct(sym);

  ComplexVector powered = ComplexVector::Ones(mult.N);
  for (int k = 0; k < n; ++k) powered = powered.cwiseProduct(mult.phi);
  const ComplexMatrix rhs = check_symbol(CyclicMultiplier(mult.N, powered)).symbol.entries();

  PowerIdentityReport rep;
  rep.max_deviation = detail::max_abs(ComplexMatrix(lhs - rhs));
  rep.pass = rep.max_deviation <= tol.residual_tol;
  return rep;
}

NormReport fourier_lp_norm(const CyclicMultiplier& mult, SchattenIndex p, std::uint64_t seed) {
  NormReport rep;
  rep.p = p;
  const double max_phi = mult.phi.size() ? mult.phi.cwiseAbs().maxCoeff() : 0.0;
  if (p.is(2.0)) {
    rep.lower = max_phi;
    rep.upper = max_phi;
    rep.exact = true;
    return rep;
  }
  const double l1 = kernel_l1_norm(mult);
  if (p.is(1.0) || p.is_infinite()) {
    rep.lower = l1;
    rep.upper = l1;
    rep.exact = true;
    return rep;
  }
  rep.lower = std::max(max_phi, convolution_lower(mult, p.p(), seed));
  rep.upper = l1;  // interpolation between the coinciding endpoint values
  rep.exact = (rep.upper - rep.lower) <= 1e-12 * std::max(1.0, rep.upper);
  return rep;
}

TransferReport transfer_check(const CyclicMultiplier& mult, SchattenIndex p,
                              const ToleranceConfig& tol, std::uint64_t seed) {
  TransferReport rep;
  rep.lhs = fourier_lp_norm(mult, p, seed);
  rep.rhs = schur_p_norm(check_symbol(mult).symbol, p, tol, seed);
  rep.slack = rep.rhs.upper - rep.lhs.upper;

  const bool certified = p.is(1.0) || p.is(2.0) || p.is_infinite();
  if (certified) {
    rep.outcome = rep.lhs.upper <= rep.rhs.upper + tol.residual_tol
                      ? TransferReport::Outcome::pass
                      : TransferReport::Outcome::fail;
  } else {
    if (rep.lhs.upper <= rep.rhs.lower + tol.residual_tol) {
      rep.outcome = TransferReport::Outcome::pass;
    } else if (rep.lhs.lower > rep.rhs.upper + tol.residual_tol) {
      rep.outcome = TransferReport::Outcome::fail;
    } else {
      rep.outcome = TransferReport::Outcome::inconclusive;
    }
  }
  return rep;
}

SemigroupClassification fourier_semigroup_bridge(const RealVector& psi,
                                                 const ToleranceConfig& tol,
                                                 std::uint64_t seed) {
  const int n = static_cast<int>(psi.size());
  if (n < 1) throw InputError("psi must be nonempty");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(psi(i))) throw InputError("psi entries must be finite");
  }
  RealMatrix cost(n, n);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      cost(g, h) = psi(((g - h) % n + n) % n);
    }
  }
  return classify_cost(CostMatrix(cost), tol, seed);
}

}  // namespace schurlab
