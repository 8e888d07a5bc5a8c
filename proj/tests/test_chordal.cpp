#include "edmc/chordal.hpp"

#include <random>

#include "doctest.h"
#include "edmc/instances.hpp"
#include "test_util.hpp"

using namespace edmc;
using namespace edmc::test;

namespace {

UnderlyingGraph cycle(int n) {
  UnderlyingGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

UnderlyingGraph complete(int n) {
  UnderlyingGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

bool valid_chordless_cycle(const UnderlyingGraph& g, const std::vector<int>& cyc) {
  const int len = static_cast<int>(cyc.size());
  if (len < 4) return false;
  for (int i = 0; i < len; ++i)
    if (!g.edge(cyc[i], cyc[(i + 1) % len])) return false;
  for (int a = 0; a < len; ++a)
    for (int b = a + 2; b < len; ++b) {
      if (a == 0 && b == len - 1) continue;
      if (g.edge(cyc[a], cyc[b])) return false;
    }
  return true;
}

// Brute-force minimum fill-in over all chord subsets of bounded size.
int brute_fill_in(const UnderlyingGraph& g, int kmax) {
  if (chordal(g)) return 0;
  const auto non = g.non_edges();
  const int m = static_cast<int>(non.size());
  for (int k = 1; k <= kmax; ++k) {
    if (k > m) break;
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    while (true) {
      UnderlyingGraph h = g;
      for (int i : comb) h.add_edge(non[i].first, non[i].second);
      if (chordal(h)) return k;
      int pos = k - 1;
      while (pos >= 0 && comb[pos] == m - k + pos) --pos;
      if (pos < 0) break;
      ++comb[pos];
      for (int i = pos + 1; i < k; ++i) comb[i] = comb[i - 1] + 1;
    }
  }
  return -1;
}

InstanceFile load_data(const std::string& name) {
  return load_instance(std::string(EDMC_DATA_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("is_chordal basics") {
  const ChordalityResult c4 = is_chordal(cycle(4));
  REQUIRE(std::holds_alternative<ChordlessCycle>(c4));
  CHECK(valid_chordless_cycle(cycle(4), std::get<ChordlessCycle>(c4).vertices));

  const ChordalityResult k5 = is_chordal(complete(5));
  CHECK(std::holds_alternative<EliminationOrdering>(k5));
}

TEST_CASE("the 9-vertex figure matrix: raw adjacency is not chordal") {
  // The figure's caption calls this graph chordal, but rows 5,8,9,6 close a
  // chordless 4-cycle in the printed matrix; the witness must be genuine.
  const InstanceFile raw = load_data("fig2_raw.edm");
  const UnderlyingGraph g = UnderlyingGraph::of(raw.matrix);
  const ChordalityResult res = is_chordal(g);
  REQUIRE(std::holds_alternative<ChordlessCycle>(res));
  CHECK(valid_chordless_cycle(g, std::get<ChordlessCycle>(res).vertices));

  // Its maximal cliques, by brute force, are the five sets read off the rows.
  const auto cliques = g.maximal_cliques();
  const std::vector<std::vector<int>> expect = {
      {0, 1, 2, 3}, {2, 3, 4, 5, 6}, {4, 6, 7}, {5, 8}, {7, 8}};
  CHECK(cliques == expect);
}

TEST_CASE("repaired figure matrix is chordal with the expected cliques") {
  const InstanceFile fixed = load_data("fig2_chordal.edm");
  const UnderlyingGraph g = UnderlyingGraph::of(fixed.matrix);
  const ChordalityResult res = is_chordal(g);
  REQUIRE(std::holds_alternative<EliminationOrdering>(res));
  const auto cliques =
      maximal_cliques_chordal(g, std::get<EliminationOrdering>(res));
  const std::vector<std::vector<int>> expect = {
      {0, 1, 2, 3}, {2, 3, 4, 5, 6}, {4, 5, 6, 7}, {5, 7, 8}};
  CHECK(cliques == expect);
}

TEST_CASE("maximal_cliques_chordal on small graphs") {
  {
    const UnderlyingGraph g = complete(4);
    const auto res = std::get<EliminationOrdering>(is_chordal(g));
    CHECK(maximal_cliques_chordal(g, res) ==
          std::vector<std::vector<int>>{{0, 1, 2, 3}});
  }
  {
    UnderlyingGraph path(3);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    const auto res = std::get<EliminationOrdering>(is_chordal(path));
    CHECK(maximal_cliques_chordal(path, res) ==
          std::vector<std::vector<int>>{{0, 1}, {1, 2}});
  }
  {
    // A wrong ordering must be rejected.
    UnderlyingGraph path(3);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    CHECK_THROWS_AS(maximal_cliques_chordal(path, EliminationOrdering{{1, 0, 2}}),
                    NotChordal);
  }
}

TEST_CASE("min_fill_in basics") {
  const auto c4 = min_fill_in(cycle(4), 3);
  REQUIRE(c4.has_value());
  CHECK(c4->edges.size() == 1);

  const auto k4 = min_fill_in(complete(4), 3);
  REQUIRE(k4.has_value());
  CHECK(k4->edges.empty());

  const auto c5 = min_fill_in(cycle(5), 3);
  REQUIRE(c5.has_value());
  CHECK(c5->edges.size() == 2);

  CHECK_FALSE(min_fill_in(cycle(8), 1).has_value());
}

TEST_CASE("min_fill_in equals brute force on random graphs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 5);  // n <= 9
    UnderlyingGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 100 < 55) g.add_edge(i, j);
    const int brute = brute_fill_in(g, 4);
    const auto got = min_fill_in(g, 4);
    if (brute < 0) {
      CHECK_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      CHECK(static_cast<int>(got->edges.size()) == brute);
      UnderlyingGraph h = g;
      for (const auto& [u, v] : got->edges) h.add_edge(u, v);
      CHECK(chordal(h));
    }
  }
}

TEST_CASE("chordal_edm_check on the unit-entry chordal matrix") {
  const InstanceFile fixed = load_data("fig2_chordal.edm");
  // The largest clique is a five-point unit simplex: fine in dimension 4,
  // impossible in 3.
  CHECK(chordal_edm_check(fixed.matrix, 4).yes);
  const ChordalCheckResult no3 = chordal_edm_check(fixed.matrix, 3);
  CHECK_FALSE(no3.yes);
  CHECK(no3.witness_clique == std::vector<int>{2, 3, 4, 5, 6});

  // Fully specified input reduces to a single clique.
  CHECK(chordal_edm_check(unit_simplex(3), 2).yes);
  CHECK_FALSE(chordal_edm_check(unit_simplex(3), 1).yes);
}

TEST_CASE("chordal_edm_check requires chordality") {
  const InstanceFile raw = load_data("fig2_raw.edm");
  CHECK_THROWS_AS(chordal_edm_check(raw.matrix, 4), NotChordal);
}

TEST_CASE("chordal_complete reproduces the worked example") {
  const PartialMatrix a = paper_a_matrix();
  const ChordalCompletion comp = chordal_complete(a, 2);
  REQUIRE(comp.yes);
  // Specified entries are copied bit-for-bit.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (a.specified(i, j)) CHECK(comp.completion.at(i, j) == a.at(i, j));
  // The construction lands on the published completion: realizations agree
  // rigidly with the caption's points.
  CHECK(procrustes_residual(comp.points, paper_caption_points()) < 1e-6);
  CHECK(comp.completion.at(0, 3) == doctest::Approx(4.25).epsilon(1e-9));
  CHECK(comp.completion.at(1, 3) == doctest::Approx(4.25).epsilon(1e-9));
}

TEST_CASE("chordal_complete on a path in one dimension") {
  PartialMatrix m(3);
  m.set(0, 1, 1.0);
  m.set(1, 2, 1.0);
  const ChordalCompletion comp = chordal_complete(m, 1);
  REQUIRE(comp.yes);
  // Two line placements exist (0 or 4); the deterministic convention walks
  // away from the centroid of the placed points.
  CHECK(comp.completion.at(0, 2) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("chordal_complete returns the input for a single clique") {
  const PartialMatrix m = paper_d_matrix();
  const ChordalCompletion comp = chordal_complete(m, 2);
  REQUIRE(comp.yes);
  CHECK(comp.completion == m);
}

TEST_CASE("chordal_complete fails exactly when the check fails") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 14);
    const int d = 1 + static_cast<int>(rng() % 3);
    const InstanceFile inst =
        gen_masked_pointcloud(n, d, MaskModel::chordal_graph(), rng());
    // Sometimes probe a dimension below the generator's, where no-instances
    // occur; the check and the constructive route must agree either way.
    const int probe = (trial % 3 == 0) ? std::max(0, d - 1) : d;
    const ChordalCheckResult chk = chordal_edm_check(inst.matrix, probe);
    const ChordalCompletion comp = chordal_complete(inst.matrix, probe);
    REQUIRE(chk.yes == comp.yes);
    if (comp.yes) {
      CHECK(realized(realize(comp.completion, probe)));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (inst.matrix.specified(i, j))
            CHECK(comp.completion.at(i, j) == inst.matrix.at(i, j));
    } else {
      CHECK_FALSE(embeddable(inst.matrix.submatrix(comp.witness_clique), probe));
    }
  }
}

TEST_CASE("chordal_complete handles disconnected instances") {
  // Two separate unit edges and an isolated vertex.
  PartialMatrix m(5);
  m.set(0, 1, 1.0);
  m.set(2, 3, 4.0);
  const ChordalCompletion comp = chordal_complete(m, 2);
  REQUIRE(comp.yes);
  CHECK(realized(realize(comp.completion, 2)));
  CHECK(comp.completion.at(0, 1) == 1.0);
  CHECK(comp.completion.at(2, 3) == 4.0);
}
