#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "schurlab/kernels.hpp"

#include <cmath>
#include <random>

using namespace schurlab;

namespace {

const ToleranceConfig kTol{1e-9, 1e-6, 20000};

Kernel real_kernel(const RealMatrix& m) { return Kernel::from_real({}, m); }

RealMatrix squared_distances(const RealMatrix& points) {
  const Eigen::Index m = points.rows();
  RealMatrix k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      k(i, j) = (points.row(i) - points.row(j)).squaredNorm();
    }
  }
  return k;
}

RealMatrix random_points(Eigen::Index m, Eigen::Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  RealMatrix p(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) p(i, c) = unif(rng);
  }
  return p;
}

double form_value(const ComplexMatrix& k, const ComplexVector& c) {
  return (c.adjoint() * k * c)(0).real();
}

}  // namespace

TEST_CASE("kernel construction validates shape and finiteness") {
  CHECK_THROWS_AS(Kernel({"a"}, ComplexMatrix::Zero(2, 2)), ShapeError);
  CHECK_THROWS_AS(Kernel({}, ComplexMatrix::Zero(2, 3)), ShapeError);
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Kernel({}, bad), ShapeError);
}

TEST_CASE("is_hermitian on the worked examples") {
  CHECK(is_hermitian(real_kernel(RealMatrix::Zero(3, 3)), kTol).yes);
  CHECK(is_hermitian(real_kernel(RealMatrix::Zero(3, 3)), kTol).margin == 0.0);

  ComplexMatrix off(2, 2);
  off << Complex(0, 0), Complex(0, 1), Complex(0, 1), Complex(0, 0);
  CHECK_FALSE(is_hermitian(Kernel({}, off), kTol).yes);

  ComplexMatrix herm(2, 2);
  herm << Complex(1, 0), Complex(2, 1), Complex(2, -1), Complex(3, 0);
  CHECK(is_hermitian(Kernel({}, herm), kTol).yes);
}

TEST_CASE("classify_pd on the worked examples") {
  const ClassificationResult id4 = classify_pd(real_kernel(RealMatrix::Identity(4, 4)), kTol);
  CHECK(id4.yes);
  CHECK(id4.margin == doctest::Approx(1.0));

  const Kernel neg = real_kernel(-RealMatrix::Identity(2, 2));
  const ClassificationResult res = classify_pd(neg, kTol);
  CHECK_FALSE(res.yes);
  REQUIRE(res.witness.has_value());
  // the witness realises a strict violation of the quadratic form
  CHECK(form_value(neg.values(), *res.witness) < -0.5);

  const ClassificationResult ones = classify_pd(real_kernel(RealMatrix::Ones(3, 3)), kTol);
  CHECK(ones.yes);
  CHECK(std::abs(ones.margin) <= 1e-12);

  ComplexMatrix off(2, 2);
  off << 0, 1, 2, 0;
  CHECK_THROWS_AS(classify_pd(Kernel({}, off), kTol), PreconditionError);
}

TEST_CASE("classify_cnd on the worked examples") {
  CHECK(classify_cnd(real_kernel(RealMatrix::Constant(3, 3, 7.0)), kTol).yes);

  const ClassificationResult neg = classify_cnd(real_kernel(-RealMatrix::Identity(2, 2)), kTol);
  CHECK(neg.yes);
  CHECK(neg.margin == doctest::Approx(1.0));

  RealMatrix line(3, 3);
  line << 0, 1, 4, 1, 0, 1, 4, 1, 0;
  // oracle first: the quadratic form stays nonpositive on mean-zero vectors
  CHECK(oracles::cnd_form_max(line.cast<Complex>(), 20000, 17) <= 1e-9);
  CHECK(classify_cnd(real_kernel(line), kTol).yes);

  // failure carries a mean-zero witness with a strict violation
  const Kernel id = real_kernel(RealMatrix::Identity(2, 2));
  const ClassificationResult bad = classify_cnd(id, kTol);
  CHECK_FALSE(bad.yes);
  REQUIRE(bad.witness.has_value());
  CHECK(std::abs(bad.witness->sum()) <= 1e-12);
  CHECK(form_value(id.values(), *bad.witness) > 0.5);

  ComplexMatrix nonherm(2, 2);
  nonherm << 0, 1, 2, 0;
  CHECK_FALSE(classify_cnd(Kernel({}, nonherm), kTol).yes);
}

TEST_CASE("cnd_embedding reconstructs the worked examples") {
  const CndEmbedding zero = cnd_embedding(real_kernel(RealMatrix::Zero(3, 3)), kTol);
  CHECK(zero.residual == 0.0);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK((zero.xi.row(i) - zero.xi.row(j)).squaredNorm() == 0.0);
    }
  }

  RealMatrix line(3, 3);
  line << 0, 1, 4, 1, 0, 1, 4, 1, 0;
  const CndEmbedding emb = cnd_embedding(real_kernel(line), kTol);
  CHECK(std::abs((emb.xi.row(0) - emb.xi.row(2)).squaredNorm() - 4.0) <= 1e-9);
  CHECK(emb.residual <= 1e-9);

  RealMatrix two(2, 2);
  two << 0, 1, 1, 0;
  const CndEmbedding e2 = cnd_embedding(real_kernel(two), kTol);
  CHECK(std::abs((e2.xi.row(0) - e2.xi.row(1)).squaredNorm() - 1.0) <= 1e-12);
}

TEST_CASE("cnd_embedding rejects bad inputs") {
  RealMatrix diag(2, 2);
  diag << 1, 1, 1, 0;
  CHECK_THROWS_AS(cnd_embedding(real_kernel(diag), kTol), EmbeddingInfeasibleError);

  RealMatrix notcnd(2, 2);
  notcnd << 0, -1, -1, 0;
  try {
    cnd_embedding(real_kernel(notcnd), kTol);
    FAIL("expected EmbeddingInfeasibleError");
  } catch (const EmbeddingInfeasibleError& e) {
    REQUIRE(e.cnd_witness.has_value());
    CHECK(std::abs(e.cnd_witness->sum()) <= 1e-12);
    CHECK(form_value(notcnd.cast<Complex>(), *e.cnd_witness) > 0.5);
  }
}

TEST_CASE("schoenberg_scan on the worked examples") {
  const SchoenbergScan flat =
      schoenberg_scan(real_kernel(RealMatrix::Zero(3, 3)), {0.1, 1.0, 10.0}, kTol);
  CHECK(flat.pd_for_all);

  RealMatrix line(3, 3);
  line << 0, 1, 4, 1, 0, 1, 4, 1, 0;
  const SchoenbergScan scan = schoenberg_scan(real_kernel(line), {0.1, 1.0, 10.0}, kTol);
  CHECK(scan.pd_for_all);
  for (double t : scan.t_grid) {
    const RealMatrix mt = (-t * line).array().exp().matrix();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(mt);
    CHECK(es.eigenvalues()(0) >= -1e-12);
  }

  const SchoenbergScan neg =
      schoenberg_scan(real_kernel(-RealMatrix::Identity(2, 2)), {1.0}, kTol);
  CHECK(neg.pd_for_all);  // diagonal e, off-diagonal 1

  CHECK_THROWS_AS(schoenberg_scan(real_kernel(line), {1.0, -0.5}, kTol), InputError);

  RealMatrix deep(2, 2);
  deep << 0, -100, -100, 0;
  CHECK_THROWS_AS(schoenberg_scan(real_kernel(deep), {32.0}, kTol), InputError);

  ComplexMatrix nonsym(2, 2);
  nonsym << 0, 1, 2, 0;
  CHECK_THROWS_AS(schoenberg_scan(Kernel({}, nonsym), {1.0}, kTol), PreconditionError);
}

TEST_CASE("positive definite kernels negate to conditionally negative ones") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index m = 2 + trial % 5;
    ComplexMatrix r(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) r(i, j) = Complex(gauss(rng), gauss(rng));
    }
    const ComplexMatrix psd = r * r.adjoint();
    CHECK(classify_pd(Kernel({}, psd), kTol).yes);
    CHECK(classify_cnd(Kernel({}, -psd), kTol).yes);

    const ComplexMatrix herm = 0.5 * (r + r.adjoint());
    if (classify_pd(Kernel({}, herm), kTol).yes) {
      CHECK(classify_cnd(Kernel({}, -herm), kTol).yes);
    }
  }
}

TEST_CASE("embedding round trip on random point clouds") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index m = 2 + trial % 5;
    const RealMatrix pts = random_points(m, 3, rng);
    const RealMatrix k = squared_distances(pts);
    CHECK(classify_cnd(real_kernel(k), kTol).yes);
    const CndEmbedding emb = cnd_embedding(real_kernel(k), kTol);
    CHECK(emb.residual <= 1e-9);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        CHECK(std::abs((emb.xi.row(i) - emb.xi.row(j)).squaredNorm() - k(i, j)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("schoenberg consistency in both directions") {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ToleranceConfig tol = kTol;
  tol.eig_tol = 1e-8;
  std::vector<double> grid;
  for (int e = -5; e <= 5; ++e) grid.push_back(std::ldexp(1.0, e));

  int cnd_count = 0;
  for (int trial = 0; trial < 16; ++trial) {
    const Eigen::Index m = 2 + trial % 4;
    RealMatrix k;
    if (trial % 2 == 0) {
      k = squared_distances(random_points(m, 3, rng));
    } else {
      k = RealMatrix::Zero(m, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
          k(i, j) = unif(rng);
          k(j, i) = k(i, j);
        }
      }
    }
    const bool cnd = classify_cnd(real_kernel(k), tol).yes;
    const bool all_pd = schoenberg_scan(real_kernel(k), grid, tol).pd_for_all;
    CHECK(cnd == all_pd);
    if (cnd) ++cnd_count;
  }
  CHECK(cnd_count >= 8);  // the distance ensemble keeps the yes branch populated
}

TEST_CASE("conditionally negative kernels form a convex cone") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unif(0.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index m = 3 + trial % 3;
    const RealMatrix k1 = squared_distances(random_points(m, 3, rng));
    const RealMatrix k2 = squared_distances(random_points(m, 2, rng));
    const double s = unif(rng), t = unif(rng);
    CHECK(classify_cnd(real_kernel(s * k1 + t * k2), kTol).yes);
  }
}
