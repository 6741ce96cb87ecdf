#include "schurlab/selftest.hpp"

#include "schurlab/kernels.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/semigroup.hpp"
#include "schurlab/transference.hpp"

#include "detail/ascent.hpp"
#include "detail/linalg.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace schurlab::selftest {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// Test-side oracle, independent of the library ascent: the scaling duality
// ||M_A|| = sup over unit xi, eta of nuclear(diag(conj eta) A diag(xi)),
// explored by random sampling plus annealed local search.
double sampling_oracle_opnorm_lower(const ComplexMatrix& a, int samples, int anneal,
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

struct DigestAccumulator {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  void add(double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    state ^= bits + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
  }
};

std::vector<double> log2_grid(int lo, int hi) {
  std::vector<double> grid;
  for (int e = lo; e <= hi; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, std::ostream* log) {
  std::vector<CriterionResult> results;
  const auto total_start = Clock::now();

  auto finish = [&](CriterionResult r, const Clock::time_point& start) {
    r.seconds =
        std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - start).count();
    if (log) {
      *log << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " - " << r.detail << fmt(" (%.2fs)", r.seconds)
           << "\n";
      log->flush();
    }
    results.push_back(std::move(r));
  };

  ToleranceConfig tol;  // eig 1e-9, residual 1e-6

  // shared feasible ensemble: witnesses in R^3, m <= 6
  std::vector<CostMatrix> feasible;
  {
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const Eigen::Index m = 2 + (i % 5);
      RealMatrix alpha(m, 3), beta(m, 3);
      for (Eigen::Index r = 0; r < m; ++r) {
        for (int c = 0; c < 3; ++c) {
          alpha(r, c) = unif(rng);
          beta(r, c) = unif(rng);
        }
      }
      RealMatrix a(m, m);
      for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
          a(r, c) = (alpha.row(r) - beta.row(c)).squaredNorm();
        }
      }
      feasible.emplace_back(a);
    }
  }

  // 1. embedding round trip
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "embedding-round-trip";
    double worst = 0.0;
    int ok = 0;
    for (const CostMatrix& a : feasible) {
      SemigroupClassification cls = classify_cost(a, tol, seed);
      if (!cls.feasible || !cls.witness) continue;
      const VerifyReport ver = verify_embedding(a, *cls.witness, tol);
      worst = std::max(worst, cls.witness->residual);
      if (cls.witness->residual <= 1e-6 && ver.pass) ++ok;
    }
    const double secs =
        std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - start).count();
    r.pass = ok == 100 && secs <= 30.0;
    r.detail = fmt("100 instances, %g feasible with residual <= 1e-6, worst %.3g", ok, worst);
    finish(std::move(r), start);
  }

  // 2. forward direction: contractive at every sampled time
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "contractivity-forward";
    const std::vector<double> grid = log2_grid(-6, 6);
    double worst_upper = 0.0;
    int ok = 0;
    for (const CostMatrix& a : feasible) {
      const ContractivityScan scan = contractivity_scan(a, grid, tol, seed);
      for (const NormReport& rep : scan.reports) worst_upper = std::max(worst_upper, rep.upper);
      if (scan.all_contractive) ++ok;
    }
    r.pass = ok == 100;
    r.detail = fmt("%g/100 scans contractive over 13 sampled times, worst upper %.9f", ok, worst_upper);
    finish(std::move(r), start);
  }

  // 3. converse witness: crafted cost matrix with a norm certificate
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "infeasibility-witness";
    RealMatrix a(2, 2);
    a << 0, 1, 4, 0;
    const CostMatrix cost(a);
    const SemigroupClassification cls = classify_cost(cost, tol, seed);
    const SchurSymbol sym = evaluate(cost, 1.0);
    detail::AscentOptions aopt;
    aopt.seed = seed;
    aopt.starts = 8;
    const double impl_lower =
        detail::multiplier_norm_lower(sym.entries(), SchattenIndex::infinity(), aopt).value;
    const double oracle = sampling_oracle_opnorm_lower(sym.entries(), 300, 20000, seed + 7);
    const double upper = factorization_norm(sym, tol, seed).value;
    const bool graded = cls.certificate &&
                        cls.certificate->grade == InfeasibilityCertificate::Grade::norm_bound;
    r.pass = !cls.feasible && graded && impl_lower > 1.0 + 1e-3 && oracle > 1.0 + 1e-3 &&
             oracle <= upper + 1e-6;
    r.detail = fmt("certified lower %.6f, oracle %.6f, upper %.6f at t=1", impl_lower, oracle, upper);
    finish(std::move(r), start);
  }

  // 4. Schoenberg consistency on mixed CND / generic kernels
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "schoenberg-consistency";
    std::mt19937_64 rng(seed + 4);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ToleranceConfig stol;
    stol.eig_tol = 1e-8;
    const std::vector<double> grid = log2_grid(-5, 5);
    int agree = 0;
    for (int i = 0; i < 50; ++i) {
      const Eigen::Index m = 2 + (i % 4);
      RealMatrix k(m, m);
      if (i % 2 == 0) {
        RealMatrix pts(m, 3);
        for (Eigen::Index rr = 0; rr < m; ++rr) {
          for (int c = 0; c < 3; ++c) pts(rr, c) = unif(rng);
        }
        for (Eigen::Index rr = 0; rr < m; ++rr) {
          for (Eigen::Index c = 0; c < m; ++c) {
            k(rr, c) = (pts.row(rr) - pts.row(c)).squaredNorm();
          }
        }
      } else {
        k.setZero();
        for (Eigen::Index rr = 0; rr < m; ++rr) {
          for (Eigen::Index c = rr + 1; c < m; ++c) {
            k(rr, c) = unif(rng);
            k(c, rr) = k(rr, c);
          }
        }
      }
      const Kernel kern = Kernel::from_real({}, k);
      const bool cnd = classify_cnd(kern, stol).yes;
      const bool scan = schoenberg_scan(kern, grid, stol).pd_for_all;
      if (cnd == scan) ++agree;
    }
    r.pass = agree == 50;
    r.detail = fmt("%g/50 trials agree across 11 sampled times", agree);
    finish(std::move(r), start);
  }

  // 5. absorption identities
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "absorption-identities";
    std::mt19937_64 rng(seed + 5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const SchattenIndex ps[4] = {SchattenIndex(1.0), SchattenIndex(2.0), SchattenIndex(3.5),
                                 SchattenIndex::infinity()};
    double worst_rel = 0.0;
    int equal_ok = 0;
    for (int i = 0; i < 50; ++i) {
      const Eigen::Index m = 2 + (i % 2);
      const Eigen::Index d = 1 + ((i / 2) % 2);
      const int n = 2 + ((i / 4) % 2);
      ComplexMatrix x(m * d, m * d);
      for (Eigen::Index c = 0; c < m * d; ++c) {
        for (Eigen::Index rr = 0; rr < m * d; ++rr) x(rr, c) = Complex(gauss(rng), gauss(rng));
      }
      const AbsorptionReport rep = absorption_check(BlockElement(m, d, x), n, ps[i % 4]);
      const double rel = rep.diff / std::max(1.0, rep.rhs);
      worst_rel = std::max(worst_rel, rel);
      if (rel <= 1e-8) ++equal_ok;
    }
    double worst_slack = 0.0;
    int slack_ok = 0;
    for (int i = 0; i < 20; ++i) {
      const Eigen::Index m = 2 + (i % 2);
      const int n = 2 + (i % 2);
      RealMatrix a(m, m);
      for (Eigen::Index c = 0; c < m; ++c) {
        for (Eigen::Index rr = 0; rr < m; ++rr) a(rr, c) = gauss(rng);
      }
      const MultiplierPowerReport rep =
          absorption_multiplier_check(SchurSymbol::from_real({}, a), n, ps[i % 4], tol, seed);
      worst_slack = std::min(worst_slack, rep.slack);
      if (rep.slack >= -1e-8) ++slack_ok;
    }
    r.pass = equal_ok == 50 && slack_ok == 20;
    r.detail = fmt("equality worst rel %.3g (50 ok), companion worst slack %.3g (20 ok)", worst_rel,
                   worst_slack);
    finish(std::move(r), start);
  }

  // 6. scalar transference at the certified exponents
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "transference-endpoints";
    const SchattenIndex ps[3] = {SchattenIndex(1.0), SchattenIndex(2.0),
                                 SchattenIndex::infinity()};
    int ok = 0;
    double worst_violation = -1.0;
    double worst_p2 = 0.0;
    for (int pi = 0; pi < 3; ++pi) {
      std::mt19937_64 rng(seed + 60 + pi);
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      for (int i = 0; i < 50; ++i) {
        const int n = 2 + (i % 7);
        ComplexVector phi(n);
        for (int g = 0; g < n; ++g) phi(g) = unif(rng);
        const CyclicMultiplier mult(n, phi);
        const TransferReport rep = transfer_check(mult, ps[pi], tol, seed);
        const double violation = rep.lhs.upper - rep.rhs.upper;
        worst_violation = std::max(worst_violation, violation);
        bool trial_ok = violation <= 1e-6;
        if (ps[pi].is(2.0)) {
          const double dev = std::abs(rep.lhs.upper - rep.rhs.upper);
          worst_p2 = std::max(worst_p2, dev);
          trial_ok = trial_ok && dev <= 1e-10;
        }
        if (trial_ok) ++ok;
      }
    }
    r.pass = ok == 150;
    r.detail =
        fmt("%g/150 trials, worst lhs-rhs %.3g, worst p=2 deviation %.3g", ok, worst_violation, worst_p2);
    finish(std::move(r), start);
  }

  // 7. analyticity probe soundness at p = 2
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "analyticity-probe-p2";
    const std::vector<double> grid = log2_grid(-6, 6);
    int ok = 0, total = 0;
    double worst_dev = 0.0;
    for (std::size_t idx = 0; idx < feasible.size(); ++idx) {
      const CostMatrix& a = feasible[idx];
      const int n = 1 + static_cast<int>(idx % 3);
      for (double t : grid) {
        ++total;
        const ProbeReport rep = beurling_probe(a, t, n, SchattenIndex(2.0), 1, tol, seed);
        double closed = 0.0;
        for (Eigen::Index rr = 0; rr < a.size(); ++rr) {
          for (Eigen::Index cc = 0; cc < a.size(); ++cc) {
            closed = std::max(closed, std::abs(1.0 - std::exp(-t * a.entries()(rr, cc))));
          }
        }
        closed = std::pow(closed, n);
        const double dev = std::abs(rep.upper - closed);
        worst_dev = std::max(worst_dev, dev);
        // the exact value is < 1; in doubles it can round up to exactly 1
        if (rep.verdict == ProbeReport::Verdict::strictly_below && rep.upper <= 1.0 &&
            dev <= 1e-12) {
          ++ok;
        }
      }
    }
    r.pass = ok == total;
    r.detail = fmt("%g/%g probes strictly below threshold, worst formula deviation %.3g",
                   static_cast<double>(ok), static_cast<double>(total), worst_dev);
    finish(std::move(r), start);
  }

  // 8. norm oracle agreement
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "norm-oracle-agreement";
    RealMatrix h(2, 2);
    h << 1, 1, -1, 1;
    const SchurSymbol hs = SchurSymbol::from_real({}, h);
    const double val = factorization_norm(hs, tol, seed).value;
    const double oracle = sampling_oracle_opnorm_lower(hs.entries(), 300, 20000, seed + 8);
    const bool sqrt2_ok = std::abs(val - std::numbers::sqrt2) <= 1e-6 &&
                          std::abs(val - oracle) <= 1e-3;

    const SchurSymbol ones = SchurSymbol::from_real({}, RealMatrix::Ones(3, 3));
    const double ones_val = factorization_norm(ones, tol, seed).value;
    const bool ones_ok = std::abs(ones_val - 1.0) <= 1e-9;

    std::mt19937_64 rng(seed + 80);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int cp_ok = 0;
    double worst_cp = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Eigen::Index m = 2 + (i % 4);
      RealMatrix root(m, m);
      for (Eigen::Index c = 0; c < m; ++c) {
        for (Eigen::Index rr = 0; rr < m; ++rr) root(rr, c) = gauss(rng);
      }
      const RealMatrix psd = root * root.transpose();
      const double fval = factorization_norm(SchurSymbol::from_real({}, psd), tol, seed).value;
      const double dev = std::abs(fval - psd.diagonal().maxCoeff());
      worst_cp = std::max(worst_cp, dev);
      if (dev <= 1e-6) ++cp_ok;
    }
    r.pass = sqrt2_ok && ones_ok && cp_ok == 20;
    r.detail = fmt("sqrt2 value %.9f vs oracle %.9f; ones |value-1| %.3g", val, oracle,
                   std::abs(ones_val - 1.0)) +
               fmt("; cp worst |value-maxdiag| %.3g", worst_cp);
    finish(std::move(r), start);
  }

  // 9. wall time and deterministic replay
  {
    const auto start = Clock::now();
    CriterionResult r;
    r.name = "runtime-and-determinism";
    const double elapsed =
        std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - total_start)
            .count();

    auto digest_once = [&] {
      DigestAccumulator acc;
      RealMatrix a(2, 2);
      a << 0, 1, 4, 0;
      const SchurSymbol sym = evaluate(CostMatrix(a), 1.0);
      detail::AscentOptions aopt;
      aopt.seed = seed;
      aopt.starts = 8;
      acc.add(detail::multiplier_norm_lower(sym.entries(), SchattenIndex::infinity(), aopt).value);
      RealMatrix h(2, 2);
      h << 1, 1, -1, 1;
      acc.add(factorization_norm(SchurSymbol::from_real({}, h), tol, seed).value);
      ComplexVector phi(5);
      phi << 0.3, -0.7, 0.1, 0.9, -0.2;
      acc.add(transfer_check(CyclicMultiplier(5, phi), SchattenIndex::infinity(), tol, seed).slack);
      return acc.state;
    };
    const std::uint64_t d1 = digest_once();
    const std::uint64_t d2 = digest_once();
    r.pass = elapsed <= 300.0 && d1 == d2;
    r.detail = fmt("elapsed %.1fs of 300s budget, replay digest ", elapsed) +
               (d1 == d2 ? "matched" : "MISMATCH");
    finish(std::move(r), start);
  }

  return results;
}

}  // namespace schurlab::selftest
