#include "schurlab/semigroup.hpp"

#include "detail/ascent.hpp"
#include "detail/linalg.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace schurlab {

namespace {

std::vector<std::string> default_labels(Eigen::Index m) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out.push_back(std::to_string(i));
  return out;
}

// Projection onto the affine slice of symmetric 2m x 2m matrices S with
//   S_ii + S_{m+j,m+j} - 2 S_{i,m+j} = a_ij  for all i, j.
// The constraint gradients have the closed-form Gram matrix
//   <grad_ij, grad_kl> = [i==k] + [j==l] + 2 [i==k][j==l].
class GramSliceProjector {
 public:
  explicit GramSliceProjector(const RealMatrix& a) : a_(a), m_(a.rows()) {
    const Eigen::Index mm = m_ * m_;
    RealMatrix gram = RealMatrix::Zero(mm, mm);
    for (Eigen::Index i = 0; i < m_; ++i) {
      for (Eigen::Index j = 0; j < m_; ++j) {
        const Eigen::Index row = i * m_ + j;
        for (Eigen::Index l = 0; l < m_; ++l) gram(row, i * m_ + l) += 1.0;
        for (Eigen::Index k = 0; k < m_; ++k) gram(row, k * m_ + j) += 1.0;
        gram(row, row) += 2.0;
      }
    }
    llt_.compute(gram);
  }

  RealVector violation(const RealMatrix& s) const {
    RealVector v(m_ * m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      for (Eigen::Index j = 0; j < m_; ++j) {
        v(i * m_ + j) = s(i, i) + s(m_ + j, m_ + j) - 2.0 * s(i, m_ + j) - a_(i, j);
      }
    }
    return v;
  }

  RealMatrix project(const RealMatrix& s) const {
    const RealVector lambda = llt_.solve(violation(s));
    RealMatrix out = s;
    for (Eigen::Index i = 0; i < m_; ++i) {
      for (Eigen::Index j = 0; j < m_; ++j) {
        const double l = lambda(i * m_ + j);
        out(i, i) -= l;
        out(m_ + j, m_ + j) -= l;
        out(i, m_ + j) += l;
        out(m_ + j, i) += l;
      }
    }
    return out;
  }

 private:
  RealMatrix a_;
  Eigen::Index m_;
  Eigen::LLT<RealMatrix> llt_;
};

double embedding_residual(const RealMatrix& a, const RealMatrix& alpha, const RealMatrix& beta) {
  double res = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double d2 = (alpha.row(i) - beta.row(j)).squaredNorm();
      res = std::max(res, std::abs(d2 - a(i, j)));
    }
  }
  return res;
}

// Levenberg-Marquardt pass on ||alpha_i - beta_j||^2 = a_ij.
void polish_witness(const RealMatrix& a, RealMatrix& alpha, RealMatrix& beta) {
  const Eigen::Index m = a.rows();
  const Eigen::Index r = alpha.cols();
  if (r == 0) return;
  const Eigen::Index nvar = 2 * m * r;

  double damping = 1e-8;
  for (int iter = 0; iter < 80; ++iter) {
    RealVector res(m * m);
    RealMatrix jac = RealMatrix::Zero(m * m, nvar);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index row = i * m + j;
        const RealVector diff = (alpha.row(i) - beta.row(j)).transpose();
        res(row) = diff.squaredNorm() - a(i, j);
        worst = std::max(worst, std::abs(res(row)));
        jac.block(row, i * r, 1, r) = 2.0 * diff.transpose();
        jac.block(row, (m + j) * r, 1, r) = -2.0 * diff.transpose();
      }
    }
    if (worst <= 1e-12 * std::max(1.0, detail::max_abs(a))) break;

    RealMatrix jtj = jac.transpose() * jac;
    jtj.diagonal().array() += damping * std::max(1.0, jtj.trace() / nvar);
    RealVector step = jtj.ldlt().solve(-jac.transpose() * res);

    RealMatrix na = alpha, nb = beta;
    for (Eigen::Index i = 0; i < m; ++i) na.row(i) += step.segment(i * r, r).transpose();
    for (Eigen::Index j = 0; j < m; ++j) nb.row(j) += step.segment((m + j) * r, r).transpose();
    if (embedding_residual(a, na, nb) < worst) {
      alpha = na;
      beta = nb;
      damping = std::max(damping * 0.3, 1e-12);
    } else {
      damping *= 10.0;
      if (damping > 1e8) break;
    }
  }
}

// The projection phase only finds the approximate shape of the Gram matrix;
// the least-squares polish closes the residual. The eigen-tail of a stalled
// projection iterate poisons the polish, so try the dominant dimensions
// first and fall back to seeded low-dimensional restarts.
void robust_polish(const RealMatrix& a, RealMatrix& alpha, RealMatrix& beta,
                   double target, std::uint64_t seed) {
  const Eigen::Index m = a.rows();
  const Eigen::Index r_full = alpha.cols();

  RealMatrix best_alpha = alpha, best_beta = beta;
  double best = std::numeric_limits<double>::infinity();
  auto attempt = [&](RealMatrix al, RealMatrix be) {
    polish_witness(a, al, be);
    const double res = embedding_residual(a, al, be);
    if (res < best) {
      best = res;
      best_alpha = std::move(al);
      best_beta = std::move(be);
    }
  };

  // columns are ordered by ascending eigenvalue; their squared norms are the
  // eigenvalues, which locates the dominant block
  double top = 0.0;
  for (Eigen::Index c = 0; c < r_full; ++c) {
    top = std::max(top, alpha.col(c).squaredNorm() + beta.col(c).squaredNorm());
  }
  Eigen::Index dominant = 0;
  for (Eigen::Index c = 0; c < r_full; ++c) {
    if (alpha.col(c).squaredNorm() + beta.col(c).squaredNorm() > 1e-3 * top) ++dominant;
  }

  std::vector<Eigen::Index> keeps;
  auto push_keep = [&](Eigen::Index k) {
    k = std::clamp<Eigen::Index>(k, 0, r_full);
    for (Eigen::Index seen : keeps) {
      if (seen == k) return;
    }
    keeps.push_back(k);
  };
  push_keep(dominant);
  push_keep(dominant + 1);
  push_keep(r_full);
  push_keep(3);
  push_keep(4);

  for (Eigen::Index keep : keeps) {
    attempt(alpha.rightCols(keep), beta.rightCols(keep));
    if (best <= target) break;
  }

  std::mt19937_64 rng(seed ^ 0x5eedf00dULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double point_scale = std::sqrt(std::max(1.0, detail::max_abs(a)));
  for (int s = 0; s < 6 && best > target; ++s) {
    const Eigen::Index r = 3 + s % 3;
    RealMatrix al(m, r), be(m, r);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index c = 0; c < r; ++c) {
        al(i, c) = 0.5 * point_scale * gauss(rng);
        be(i, c) = 0.5 * point_scale * gauss(rng);
      }
    }
    attempt(std::move(al), std::move(be));
  }

  alpha = std::move(best_alpha);
  beta = std::move(best_beta);
}

std::vector<double> default_certificate_grid() {
  std::vector<double> grid;
  for (int e = -6; e <= 6; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

}  // namespace

CostMatrix::CostMatrix(std::vector<std::string> labels, RealMatrix entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw ShapeError("cost matrix must be square");
  }
  if (labels_.empty()) labels_ = default_labels(entries_.rows());
  if (static_cast<Eigen::Index>(labels_.size()) != entries_.rows()) {
    throw ShapeError("cost matrix label list does not match matrix size");
  }
  if (!detail::all_finite(entries_)) {
    throw ShapeError("cost matrix entries must be finite");
  }
}

CostMatrix::CostMatrix(RealMatrix entries) : CostMatrix({}, std::move(entries)) {}

double CostMatrix::max_abs() const { return detail::max_abs(entries_); }

namespace {

// std::exp entrywise; the vectorized array exp clamps extreme arguments
// instead of underflowing to zero
RealMatrix exp_entrywise(const RealMatrix& m) {
  return m.unaryExpr([](double v) { return std::exp(v); });
}

}  // namespace

SchurSymbol evaluate(const CostMatrix& a, double t) {
  if (t < 0.0 || std::isnan(t)) throw InputError("evaluate requires t >= 0");
  return SchurSymbol::from_real(a.labels(), exp_entrywise(-t * a.entries()));
}

LawCheck semigroup_law_check(const CostMatrix& a, double s, double t,
                             const ToleranceConfig& tol) {
  if (s < 0.0 || t < 0.0) throw InputError("semigroup_law_check requires s, t >= 0");
  const RealMatrix lhs = exp_entrywise(-(s + t) * a.entries());
  const RealMatrix rhs = exp_entrywise(-s * a.entries())
                             .cwiseProduct(exp_entrywise(-t * a.entries()));
  LawCheck out;
  out.max_deviation = detail::max_abs(RealMatrix(lhs - rhs));
  out.pass = out.max_deviation <= tol.residual_tol;
  return out;
}

SemigroupClassification classify_cost(const CostMatrix& a, const ToleranceConfig& tol,
                                      std::uint64_t seed) {
  tol.validate();
  const Eigen::Index m = a.size();
  const RealMatrix& av = a.entries();
  const double scale = std::max(1.0, a.max_abs());

  SemigroupClassification out;

  // squared distances are nonnegative
  const double min_entry = av.minCoeff();
  bool fast_infeasible = min_entry < -tol.residual_tol;

  RealMatrix alpha, beta;
  double residual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();

  if (!fast_infeasible) {
    GramSliceProjector slice(av);
    RealMatrix x = slice.project(RealMatrix::Zero(2 * m, 2 * m));
    double best_gap = std::numeric_limits<double>::infinity();
    int since_best = 0;
    const int cap = std::max(tol.max_iter, 100);
    for (int it = 0; it < cap; ++it) {
      const RealMatrix y = detail::psd_project(x);
      x = slice.project(y);
      gap = (y - x).norm() / scale;
      if (gap <= 1e-10) break;
      if (gap < best_gap * (1.0 - 1e-4)) {
        best_gap = gap;
        since_best = 0;
      } else if (++since_best > 250) {
        break;  // stalled
      }
    }
    const RealMatrix gram = detail::psd_project(x);
    RealMatrix rows = detail::psd_sqrt_rows(gram, tol.eig_tol);
    alpha = rows.topRows(m);
    beta = rows.bottomRows(m);
    robust_polish(av, alpha, beta, std::min(tol.residual_tol, 1e-9), seed);
    residual = embedding_residual(av, alpha, beta);
  }

  if (!fast_infeasible && residual <= tol.residual_tol) {
    EmbeddingWitness w;
    w.alpha = std::move(alpha);
    w.beta = std::move(beta);
    w.residual = residual;
    out.feasible = true;
    out.witness = std::move(w);
    return out;
  }

  // infeasible: look for a time with a certified multiplier-norm lower
  // bound above 1, the grade of certificate tied to the semigroup statement
  InfeasibilityCertificate cert;
  cert.projection_gap = fast_infeasible ? std::abs(min_entry) : std::max(gap, residual);
  double best_lower = 0.0;
  double best_t = 0.0;
  std::optional<ComplexMatrix> best_witness;
  const double growth = std::max(0.0, -min_entry);
  for (double t : default_certificate_grid()) {
    if (t * growth > 700.0) continue;  // entrywise exponential would overflow
    const SchurSymbol sym = evaluate(a, t);
    double lower = sym.max_abs();
    std::optional<ComplexMatrix> wit;
    detail::AscentOptions aopt;
    aopt.seed = seed;
    aopt.starts = 4;
    aopt.iters = 60;
    detail::AscentResult asc =
        detail::multiplier_norm_lower(sym.entries(), SchattenIndex::infinity(), aopt);
    if (asc.value > lower) {
      lower = asc.value;
      wit = asc.b;
    }
    if (lower > best_lower) {
      best_lower = lower;
      best_t = t;
      best_witness = wit;
    }
  }
  if (best_lower > 1.0 + 1e-6) {
    cert.grade = InfeasibilityCertificate::Grade::norm_bound;
    cert.t_star = best_t;
    NormReport report;
    report.p = SchattenIndex::infinity();
    report.lower = best_lower;
    report.lower_witness = best_witness;
    FactorizationResult fact = factorization_norm(evaluate(a, best_t), tol, seed);
    report.upper = fact.value;
    report.exact = fact.converged;
    cert.norm_report = std::move(report);
  } else {
    cert.grade = InfeasibilityCertificate::Grade::projection_residual;
  }
  out.feasible = false;
  out.certificate = std::move(cert);
  return out;
}

VerifyReport verify_embedding(const CostMatrix& a, const EmbeddingWitness& w,
                              const ToleranceConfig& tol) {
  if (w.alpha.rows() != a.size() || w.beta.rows() != a.size() ||
      w.alpha.cols() != w.beta.cols()) {
    throw ShapeError("embedding witness dimensions do not match the cost matrix");
  }
  VerifyReport out;
  out.residual = embedding_residual(a.entries(), w.alpha, w.beta);
  out.pass = out.residual <= tol.residual_tol;
  return out;
}

ContractivityScan contractivity_scan(const CostMatrix& a, const std::vector<double>& t_grid,
                                     const ToleranceConfig& tol, std::uint64_t seed) {
  ContractivityScan scan;
  scan.t_grid = t_grid;
  scan.all_contractive = true;
  for (double t : t_grid) {
    FactorizationResult fact = factorization_norm(evaluate(a, t), tol, seed);
    NormReport report;
    report.p = SchattenIndex::infinity();
    report.lower = fact.lower;
    report.upper = fact.value;
    report.exact = fact.converged;
    report.lower_witness = fact.lower_witness;
    scan.all_contractive = scan.all_contractive && report.upper <= 1.0 + tol.residual_tol;
    scan.reports.push_back(std::move(report));
  }
  return scan;
}

BlockDilationReport block_dilation(const CostMatrix& a, const EmbeddingWitness& w, double t,
                                   const ToleranceConfig& tol) {
  if (t < 0.0 || std::isnan(t)) throw InputError("block_dilation requires t >= 0");
  VerifyReport check = verify_embedding(a, w, tol);
  if (!check.pass) {
    throw PreconditionError("block_dilation requires a verified embedding witness");
  }
  const Eigen::Index m = a.size();
  RealMatrix gamma(2 * m, w.dim());
  gamma.topRows(m) = w.alpha;
  gamma.bottomRows(m) = w.beta;

  RealMatrix sym(2 * m, 2 * m);
  for (Eigen::Index u = 0; u < 2 * m; ++u) {
    for (Eigen::Index v = 0; v < 2 * m; ++v) {
      sym(u, v) = std::exp(-t * (gamma.row(u) - gamma.row(v)).squaredNorm());
    }
  }
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(2 * m));
  for (const std::string& l : a.labels()) labels.push_back("1." + l);
  for (const std::string& l : a.labels()) labels.push_back("2." + l);

  BlockDilationReport out{SchurSymbol::from_real(std::move(labels), sym), {}, false, false};
  out.cp = classify_cp(out.symbol, tol);
  double diag_dev = 0.0;
  for (Eigen::Index u = 0; u < 2 * m; ++u) {
    diag_dev = std::max(diag_dev, std::abs(sym(u, u) - 1.0));
  }
  out.unital = diag_dev <= tol.residual_tol;
  out.selfadjoint = classify_selfadjoint(out.symbol, tol).yes;
  return out;
}

ProbeReport beurling_probe(const CostMatrix& a, double t, int n, SchattenIndex p,
                           Eigen::Index d, const ToleranceConfig& tol, std::uint64_t seed) {
  if (t < 0.0 || std::isnan(t)) throw InputError("beurling_probe requires t >= 0");
  if (n < 1) throw InputError("beurling_probe requires n >= 1");
  if (d < 1) throw InputError("beurling_probe requires d >= 1");

  ProbeReport rep;
  rep.t = t;
  rep.n = n;
  rep.p = p;
  rep.d = d;
  rep.threshold = std::ldexp(1.0, n);

  const RealMatrix base =
      (1.0 - exp_entrywise(-t * a.entries()).array()).matrix();
  if (p.is(2.0)) {
    // exact closed form: the multiplier is diagonal on matrix units
    const double value = std::pow(detail::max_abs(base), n);
    rep.lower = value;
    rep.upper = value;
  } else {
    if (a.size() * d > 4096) {
      throw ResourceLimitError("amplified probe exceeds the configured size cap");
    }
    RealMatrix powered = RealMatrix::Ones(a.size(), a.size());
    for (int k = 0; k < n; ++k) powered = powered.cwiseProduct(base);
    SchurSymbol sym = SchurSymbol::from_real(a.labels(), powered);
    if (d > 1) {
      const ComplexMatrix amp =
          detail::kron(sym.entries(), ComplexMatrix::Ones(d, d));
      sym = SchurSymbol({}, amp);
    }
    NormReport norm = schur_p_norm(sym, p, tol, seed);
    rep.lower = norm.lower;
    rep.upper = norm.upper;
  }

  if (rep.upper < rep.threshold) {
    rep.verdict = ProbeReport::Verdict::strictly_below;
  } else if (rep.lower >= rep.threshold) {
    rep.verdict = ProbeReport::Verdict::at_or_above;
  } else {
    rep.verdict = ProbeReport::Verdict::inconclusive;
  }
  return rep;
}

std::vector<ProbeReport> sector_margin_sweep(const CostMatrix& a,
                                             const std::vector<double>& t_grid, int n,
                                             SchattenIndex p, Eigen::Index d,
                                             const ToleranceConfig& tol,
                                             std::uint64_t seed) {
  std::vector<ProbeReport> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    rows.push_back(beurling_probe(a, t, n, p, d, tol, seed));
  }
  return rows;
}

}  // namespace schurlab
