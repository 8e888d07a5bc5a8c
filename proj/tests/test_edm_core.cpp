#include "edmc/edm_core.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace edmc;
using namespace edmc::test;

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Independent volume oracle: |det of edge vectors| / j! for j+1 points in R^j.
double simplex_volume(const Eigen::MatrixXd& pts) {
  const int j = static_cast<int>(pts.cols());
  Eigen::MatrixXd e(j, j);
  for (int i = 0; i < j; ++i) e.row(i) = pts.row(i + 1) - pts.row(0);
  return std::abs(e.determinant()) / factorial(j);
}

}  // namespace

TEST_CASE("cm_determinant fixed goldens") {
  PartialMatrix two(2);
  two.set(0, 1, 1.0);
  CHECK(cm_determinant(two, {0, 1}) == 2.0);

  CHECK(cm_determinant(unit_simplex(3), {0, 1, 2}) == -3.0);

  CHECK(cm_determinant(collinear({0, 1, 2}), {0, 1, 2}) == 0.0);
}

TEST_CASE("cm_determinant requires specified entries") {
  PartialMatrix m(3);
  m.set(0, 1, 1.0);
  CHECK_THROWS_AS(cm_determinant(m, {0, 1, 2}), UnspecifiedEntry);
}

TEST_CASE("cm_determinant equals signed squared volume") {
  std::mt19937_64 rng(17);
  for (int j = 1; j <= 4; ++j) {
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXd pts = random_points(j + 1, j, rng);
      const double vol = simplex_volume(pts);
      if (vol < 1e-4) continue;  // skip near-degenerate draws
      const double expect = std::pow(-1.0, j + 1) * std::pow(2.0, j) *
                            factorial(j) * factorial(j) * vol * vol;
      const double got = cm_determinant(matrix_of_points(pts), [&] {
        std::vector<int> idx(j + 1);
        for (int i = 0; i <= j; ++i) idx[i] = i;
        return idx;
      }());
      CHECK(std::abs(got - expect) <= 1e-8 * std::abs(expect));
    }
  }
}

TEST_CASE("is_strongly_embeddable") {
  const PartialMatrix tri = unit_simplex(3);
  CHECK(is_strongly_embeddable(tri, 2));
  CHECK_FALSE(is_strongly_embeddable(tri, 1));

  PartialMatrix coincident(2);
  coincident.set(0, 1, 0.0);
  CHECK(is_strongly_embeddable(coincident, 0));
}

TEST_CASE("embedding_dimension") {
  CHECK(embedding_dimension(unit_simplex(3)) == 2);
  CHECK(embedding_dimension(paper_d_matrix()) == 2);
}

TEST_CASE("embedding_dimension of the all-zero matrix is 0") {
  PartialMatrix m(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m.set(i, j, 0.0);
  CHECK(embedding_dimension(m) == 0);
}

TEST_CASE("embedding_dimension rejects non-EDMs") {
  PartialMatrix bad(3);  // violates the triangle inequality
  bad.set(0, 1, 1.0);
  bad.set(0, 2, 1.0);
  bad.set(1, 2, 100.0);
  CHECK_THROWS_AS(embedding_dimension(bad), NotEDM);
}

TEST_CASE("is_independent") {
  const PartialMatrix tri = unit_simplex(3);
  CHECK(is_independent(tri, {0}));
  CHECK(is_independent(tri, {0, 1, 2}));

  PartialMatrix coincident(2);
  coincident.set(0, 1, 0.0);
  CHECK_FALSE(is_independent(coincident, {0, 1}));

  CHECK_FALSE(is_independent(collinear({0, 1, 2}), {0, 1, 2}));
}

TEST_CASE("metric_basis") {
  CHECK(metric_basis(unit_simplex(3)).indices == std::vector<int>{0, 1, 2});

  PartialMatrix coincident(2);
  coincident.set(0, 1, 0.0);
  CHECK(metric_basis(coincident).indices == std::vector<int>{0});

  // Planar example: all four points lie in R^2, so {1,2,3} (1-based) is a
  // basis and no 4-point superset is independent.
  const PartialMatrix d = paper_d_matrix();
  CHECK(metric_basis(d).indices == std::vector<int>{0, 1, 2});
  CHECK(is_independent(d, {0, 1, 2}));
  CHECK_FALSE(is_independent(d, {0, 1, 2, 3}));
}

TEST_CASE("extend_basis") {
  const PartialMatrix tri = unit_simplex(3);
  CHECK(extend_basis(tri, {}, {0, 1, 2}).indices == std::vector<int>{0, 1, 2});
  CHECK(extend_basis(tri, {1}, {0, 1, 2}).indices == std::vector<int>{1, 0, 2});
  // already maximal: fixed point
  CHECK(extend_basis(tri, {0, 1, 2}, {0, 1, 2}).indices == std::vector<int>{0, 1, 2});

  PartialMatrix coincident(2);
  coincident.set(0, 1, 0.0);
  CHECK_THROWS_AS(extend_basis(coincident, {0, 1}, {0, 1}), NotIndependent);
}

TEST_CASE("realize golden: the worked 4-point completion") {
  const RealizeResult r = realize(paper_d_matrix(), 2);
  REQUIRE(realized(r));
  const Realization& real = std::get<Realization>(r);
  CHECK(realization_residual(paper_d_matrix(), real.points) < 1e-9);
  CHECK(procrustes_residual(real.points, paper_caption_points()) < 1e-6);
}

TEST_CASE("realize rejection certificates") {
  const RealizeResult tri1 = realize(unit_simplex(3), 1);
  REQUIRE_FALSE(realized(tri1));
  CHECK(std::get<NotEmbeddable>(tri1).reason == NotEmbeddable::Reason::RankExceeded);

  const RealizeResult s3 = realize(unit_simplex(5), 3);
  REQUIRE_FALSE(realized(s3));
  CHECK(std::get<NotEmbeddable>(s3).reason == NotEmbeddable::Reason::RankExceeded);
  CHECK(std::get<NotEmbeddable>(s3).rank_above == 4);

  const RealizeResult s4 = realize(unit_simplex(5), 4);
  REQUIRE(realized(s4));
  CHECK(realization_residual(unit_simplex(5), std::get<Realization>(s4).points) < 1e-9);

  PartialMatrix bad(3);
  bad.set(0, 1, 1.0);
  bad.set(0, 2, 1.0);
  bad.set(1, 2, 100.0);
  const RealizeResult rb = realize(bad, 2);
  REQUIRE_FALSE(realized(rb));
  CHECK(std::get<NotEmbeddable>(rb).reason == NotEmbeddable::Reason::NegativeEigenvalue);
  CHECK(std::get<NotEmbeddable>(rb).eigenvalue < 0.0);
}

TEST_CASE("realization round trip on random point sets") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const int n = 2 + static_cast<int>(rng() % 19);
    const PartialMatrix m = matrix_of_points(random_points(n, d, rng));
    const RealizeResult r = realize(m, d);
    REQUIRE(realized(r));
    CHECK(realization_residual(m, std::get<Realization>(r).points) <=
          Tolerances::defaults().real_threshold(m.max_abs_entry()));
  }
}

TEST_CASE("basis size equals embedding dimension plus one") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int n = d + 2 + static_cast<int>(rng() % 10);
    const PartialMatrix m = matrix_of_points(random_points(n, d, rng));
    CHECK(static_cast<int>(metric_basis(m).indices.size()) == embedding_dimension(m) + 1);
  }
}

TEST_CASE("realizations are unique up to rigid transformations") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int n = d + 2 + static_cast<int>(rng() % 8);
    const PartialMatrix m = matrix_of_points(random_points(n, d, rng));
    const RealizeResult a = realize(m, d);
    const RealizeResult b = realize_centered(m, d);
    REQUIRE(realized(a));
    REQUIRE(realized(b));
    CHECK(procrustes_residual(std::get<Realization>(a).points,
                              std::get<Realization>(b).points) < 1e-6);
  }
}

TEST_CASE("monotonicity of embeddability in the dimension") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int n = d + 2 + static_cast<int>(rng() % 6);
    const PartialMatrix m = matrix_of_points(random_points(n, d, rng));
    const int r = embedding_dimension(m);
    CHECK(is_strongly_embeddable(m, r));
    for (int rp = r; rp <= std::min(n - 1, r + 3); ++rp) CHECK(embeddable(m, rp));
    if (r > 0) CHECK_FALSE(embeddable(m, r - 1));
  }
}

TEST_CASE("Gram route and Cayley-Menger route agree") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const int n = 2 + static_cast<int>(rng() % 12);
    const PartialMatrix m = matrix_of_points(random_points(n, d, rng));
    const int cm_dim = embedding_dimension(m);
    for (int k = 0; k <= std::min(n - 1, cm_dim + 1); ++k) {
      const bool gram_ok = embeddable(m, k);
      const bool cm_ok = cm_dim <= k;
      REQUIRE_MESSAGE(gram_ok == cm_ok, "route disagreement at d=" << k);
    }
  }
}
