#include "detail/gamma2.hpp"

#include "detail/linalg.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <vector>

namespace schurlab::detail {

namespace {

// One symmetric coordinate of P or Q: E_kl + E_lk (or E_kk), in global
// block-matrix indices.
struct Coord {
  Eigen::Index k = 0;  // global row
  Eigen::Index l = 0;  // global col, k >= l
  bool diag = false;
  Eigen::Index slack = -1;  // index into the slack vector when diagonal
};

struct Workspace {
  Eigen::Index m = 0, n = 0, dim = 0;
  std::vector<Coord> coords;  // P params then Q params; t is coords.size()

  RealMatrix build_z(const RealMatrix& a, const RealVector& theta) const {
    const Eigen::Index nn = m + n;
    RealMatrix z = RealMatrix::Zero(nn, nn);
    z.block(0, m, m, n) = a;
    z.block(m, 0, n, m) = a.transpose();
    for (std::size_t idx = 0; idx < coords.size(); ++idx) {
      const Coord& c = coords[idx];
      z(c.k, c.l) = theta(static_cast<Eigen::Index>(idx));
      z(c.l, c.k) = theta(static_cast<Eigen::Index>(idx));
    }
    return z;
  }
};

Workspace make_workspace(Eigen::Index m, Eigen::Index n) {
  Workspace ws;
  ws.m = m;
  ws.n = n;
  Eigen::Index slack = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index l = 0; l <= k; ++l) {
      Coord c;
      c.k = k;
      c.l = l;
      c.diag = (k == l);
      if (c.diag) c.slack = slack++;
      ws.coords.push_back(c);
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l <= k; ++l) {
      Coord c;
      c.k = m + k;
      c.l = m + l;
      c.diag = (k == l);
      if (c.diag) c.slack = slack++;
      ws.coords.push_back(c);
    }
  }
  ws.dim = static_cast<Eigen::Index>(ws.coords.size()) + 1;
  return ws;
}

// theta layout: [P params, Q params, t]
struct BarrierEval {
  bool interior = false;
  double value = 0.0;  // eta * t - log det Z - sum log slacks
};

BarrierEval eval_barrier(const Workspace& ws, const RealMatrix& a, const RealVector& theta,
                         double eta) {
  BarrierEval out;
  const double t = theta(ws.dim - 1);
  double slack_logs = 0.0;
  for (const Coord& c : ws.coords) {
    if (!c.diag) continue;
    const double s = t - theta(&c - ws.coords.data());
    if (s <= 0.0) return out;
    slack_logs += std::log(s);
  }
  RealMatrix z = ws.build_z(a, theta);
  Eigen::LLT<RealMatrix> llt(z);
  if (llt.info() != Eigen::Success) return out;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double d = llt.matrixL()(i, i);
    if (d <= 0.0) return out;
    logdet += 2.0 * std::log(d);
  }
  out.interior = true;
  out.value = eta * t - logdet - slack_logs;
  return out;
}

}  // namespace

Gamma2Solution gamma2_sdp_real(const RealMatrix& a, const Gamma2Options& opt) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Workspace ws = make_workspace(m, n);
  const Eigen::Index dim = ws.dim;
  const Eigen::Index tpos = dim - 1;
  const double nu = 2.0 * static_cast<double>(m + n);  // barrier parameter

  const double sigma = singular_values(a.cast<Complex>())(0);
  const double c0 = 1.05 * sigma + 1e-8 * (1.0 + sigma);

  RealVector theta = RealVector::Zero(dim);
  for (std::size_t idx = 0; idx < ws.coords.size(); ++idx) {
    if (ws.coords[idx].diag) theta(static_cast<Eigen::Index>(idx)) = c0;
  }
  theta(tpos) = 2.0 * c0 + 1e-8;

  Gamma2Solution sol;
  double eta = opt.eta0;
  int steps = 0;
  const Eigen::Index nn = m + n;

  while (steps < opt.max_newton) {
    bool centered = false;
    for (int inner = 0; inner < opt.stage_newton && steps < opt.max_newton; ++inner, ++steps) {
      const double t = theta(tpos);
      RealMatrix z = ws.build_z(a, theta);
      Eigen::LLT<RealMatrix> llt(z);
      if (llt.info() != Eigen::Success) break;  // should not happen from the interior
      RealMatrix zinv = llt.solve(RealMatrix::Identity(nn, nn));

      RealVector slack_inv = RealVector::Zero(m + n);
      for (const Coord& c : ws.coords) {
        if (!c.diag) continue;
        const Eigen::Index idx = static_cast<Eigen::Index>(&c - ws.coords.data());
        slack_inv(c.slack) = 1.0 / (t - theta(idx));
      }

      RealVector grad = RealVector::Zero(dim);
      for (std::size_t ia = 0; ia < ws.coords.size(); ++ia) {
        const Coord& c = ws.coords[ia];
        const Eigen::Index idx = static_cast<Eigen::Index>(ia);
        grad(idx) = c.diag ? -zinv(c.k, c.k) + slack_inv(c.slack) : -2.0 * zinv(c.k, c.l);
      }
      grad(tpos) = eta - slack_inv.sum();

      RealMatrix hess = RealMatrix::Zero(dim, dim);
      for (std::size_t ia = 0; ia < ws.coords.size(); ++ia) {
        const Coord& ca = ws.coords[ia];
        for (std::size_t ib = ia; ib < ws.coords.size(); ++ib) {
          const Coord& cb = ws.coords[ib];
          // tr(Z^-1 B_a Z^-1 B_b) expanded over the 1 or 2 elementary terms
          double h = zinv(ca.l, cb.k) * zinv(cb.l, ca.k);
          if (!cb.diag) h += zinv(ca.l, cb.l) * zinv(cb.k, ca.k);
          if (!ca.diag) {
            h += zinv(ca.k, cb.k) * zinv(cb.l, ca.l);
            if (!cb.diag) h += zinv(ca.k, cb.l) * zinv(cb.k, ca.l);
          }
          hess(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib)) = h;
          hess(static_cast<Eigen::Index>(ib), static_cast<Eigen::Index>(ia)) = h;
        }
      }
      for (const Coord& c : ws.coords) {
        if (!c.diag) continue;
        const Eigen::Index idx = static_cast<Eigen::Index>(&c - ws.coords.data());
        const double s2 = slack_inv(c.slack) * slack_inv(c.slack);
        hess(idx, idx) += s2;
        hess(idx, tpos) -= s2;
        hess(tpos, idx) -= s2;
        hess(tpos, tpos) += s2;
      }

      Eigen::LDLT<RealMatrix> hsolve(hess);
      RealVector delta = -hsolve.solve(grad);
      if (hsolve.info() != Eigen::Success || !delta.allFinite()) {
        hess += 1e-10 * hess.trace() * RealMatrix::Identity(dim, dim);
        delta = -hess.ldlt().solve(grad);
      }

      const double decrement = -grad.dot(delta);
      if (!(decrement > 0.0)) {
        centered = true;
        break;
      }
      if (decrement * 0.5 < 1e-11 * std::max(1.0, std::abs(t))) {
        centered = true;
        break;
      }

      const BarrierEval base = eval_barrier(ws, a, theta, eta);
      double alpha = 1.0;
      bool moved = false;
      for (int back = 0; back < 70; ++back) {
        RealVector cand = theta + alpha * delta;
        const BarrierEval be = eval_barrier(ws, a, cand, eta);
        if (be.interior && be.value <= base.value - 0.25 * alpha * decrement) {
          theta = cand;
          moved = true;
          break;
        }
        alpha *= 0.6;
      }
      if (!moved) {
        centered = true;
        break;
      }
    }

    const double gap = nu / eta;
    if (centered && gap <= opt.rel_gap * std::max(1.0, theta(tpos))) {
      sol.converged = true;
      break;
    }
    eta *= opt.eta_mult;
  }

  sol.newton_steps = steps;
  sol.t = theta(tpos);
  sol.p = RealMatrix::Zero(m, m);
  sol.q = RealMatrix::Zero(n, n);
  for (std::size_t ia = 0; ia < ws.coords.size(); ++ia) {
    const Coord& c = ws.coords[ia];
    const double v = theta(static_cast<Eigen::Index>(ia));
    if (c.k < m) {
      sol.p(c.k, c.l) = v;
      sol.p(c.l, c.k) = v;
    } else {
      sol.q(c.k - m, c.l - m) = v;
      sol.q(c.l - m, c.k - m) = v;
    }
  }
  return sol;
}

}  // namespace schurlab::detail
