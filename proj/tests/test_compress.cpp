#include "edmc/compress.hpp"

#include <random>

#include "doctest.h"
#include "edmc/instances.hpp"
#include "test_util.hpp"

using namespace edmc;
using namespace edmc::test;

namespace {

InstanceFile load_data(const std::string& name) {
  return load_instance(std::string(EDMC_DATA_DIR) + "/" + name);
}

bool is_block_pattern(const PartialMatrix& m, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  for (int r : rows)
    for (int c : cols) {
      if (r == c) return false;
      if (m.specified(r, c)) return false;
    }
  return true;
}

// Matrix with every entry specified from a planar cloud, then a unit
// 4-simplex planted on the first five indices.
PartialMatrix planted_simplex_cloud(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PartialMatrix m = matrix_of_points(random_points(n, 2, rng));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) m.set(i, j, 1.0);
  return m;
}

}  // namespace

TEST_CASE("parameter formulas of the block-pattern compression") {
  CHECK(eta_ktt(2, 2) == 34);
  CHECK(rho_ktt(2, 2) == 7140);
  CHECK(eta_ktt(0, 2) == 4);
  CHECK(rho_ktt(0, 2) == 20);
}

TEST_CASE("detect_block_pattern on the figure matrix") {
  const InstanceFile inst = load_data("block9.edm");
  // The printed witness (rows {3,8,9}, columns {1,5,7}) is a genuine 3-block.
  CHECK(is_block_pattern(inst.matrix, {2, 7, 8}, {0, 4, 6}));
  const auto w3 = detect_block_pattern(inst.matrix, 3);
  REQUIRE(w3.has_value());
  CHECK(is_block_pattern(inst.matrix, w3->rows, w3->cols));
  CHECK(w3->rows.size() == 3);
  CHECK(w3->cols.size() == 3);
  // No 4-block exists.
  CHECK_FALSE(detect_block_pattern(inst.matrix, 4).has_value());
}

TEST_CASE("detect_block_pattern trivia") {
  CHECK_FALSE(detect_block_pattern(unit_simplex(4), 1).has_value());
  PartialMatrix m(4);  // nothing specified: plenty of blocks
  const auto w = detect_block_pattern(m, 2);
  REQUIRE(w.has_value());
  CHECK(is_block_pattern(m, w->rows, w->cols));
}

TEST_CASE("ramsey_independent_set") {
  {
    UnderlyingGraph edgeless(8);
    CHECK(ramsey_independent_set(edgeless, 4, 5) ==
          std::vector<int>{0, 1, 2, 3, 4});
  }
  {
    // Perfect matching on 10 vertices: one endpoint per edge.
    UnderlyingGraph matching(10);
    for (int i = 0; i < 10; i += 2) matching.add_edge(i, i + 1);
    const auto ind = ramsey_independent_set(matching, 3, 5);
    CHECK(ind.size() == 5);
    for (size_t a = 0; a < ind.size(); ++a)
      for (size_t b = a + 1; b < ind.size(); ++b)
        CHECK_FALSE(matching.edge(ind[a], ind[b]));
  }
  {
    UnderlyingGraph small(3);
    CHECK_THROWS_AS(ramsey_independent_set(small, 2, 10), TargetUnreachable);
  }
}

TEST_CASE("find_irrelevant_in_clique spares every protected basis") {
  std::mt19937_64 rng(77);
  const PartialMatrix m = matrix_of_points(random_points(12, 2, rng));
  std::vector<int> clique(12);
  for (int i = 0; i < 12; ++i) clique[i] = i;
  IrrelevantSchedule schedule;
  schedule.peel_rounds = 2;
  schedule.sections = {{0, 1, 2, 3}, {4, 5, 6}};
  const auto w = find_irrelevant_in_clique(m, clique, 2, schedule);
  REQUIRE(w.has_value());
  // The peeled bases are {0,1,2} and {3,4,5} for a generic planar cloud, and
  // the section bases protect within their sections; the chosen vertex is
  // outside all of them.
  CHECK(*w >= 6);
}

TEST_CASE("compress_maxdeg reduces a masked planar cloud to the stated bound") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const InstanceFile inst =
        gen_masked_pointcloud(40, 2, MaskModel::per_row_budget(1), seed);
    const CompressOutcome out = compress_maxdeg(inst.matrix, 2, 1);
    REQUIRE(out.kind == CompressOutcome::Kind::Reduced);
    CHECK(out.reduced.n() <= 12);  // (d+1)(delta+1)^2
    CHECK(out.reduced.n() + static_cast<int>(out.removed.size()) == 40);
    // Reduced instance is the principal submatrix on the kept indices.
    CHECK(out.reduced == inst.matrix.submatrix(out.kept));
    // Equivalence on a yes-instance: the reduced one stays realizable.
    const OracleResult reduced_oracle = oracle_solve(out.reduced, 2, {16, seed, 1, 600});
    CHECK(reduced_oracle.kind == OracleResult::Kind::Yes);
  }
}

TEST_CASE("compress_maxdeg gates and preconditions") {
  // Fully specified: solved outright.
  const CompressOutcome solved = compress_maxdeg(unit_simplex(3), 2, 1);
  REQUIRE(solved.kind == CompressOutcome::Kind::Solved);
  CHECK(solved.answer_yes);

  // Small instances pass through unchanged.
  PartialMatrix small(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (j != i + 2) small.set(i, j, 1.0 + i + j);
  const CompressOutcome gate = compress_maxdeg(small, 2, 2);
  REQUIRE(gate.kind == CompressOutcome::Kind::Reduced);
  CHECK(gate.reduced == small);
  CHECK(gate.removed.empty());

  // Violated row bound is rejected.
  PartialMatrix loose(6);
  loose.set(0, 1, 1.0);  // rows 2..5 have >= 3 unspecified entries
  CHECK_THROWS_AS(compress_maxdeg(loose, 2, 2), PreconditionViolated);
}

TEST_CASE("compress_maxdeg certifies planted no-instances") {
  PartialMatrix m = planted_simplex_cloud(40, 9);
  // Hide one benign pair so the instance is not fully specified.
  m.unset(30, 31);
  const CompressOutcome out = compress_maxdeg(m, 2, 1);
  REQUIRE(out.kind == CompressOutcome::Kind::Solved);
  CHECK_FALSE(out.answer_yes);
  CHECK_FALSE(embeddable(m.submatrix(out.witness_clique), 2));
}

TEST_CASE("compress_ktt full loop at dimension zero") {
  // d=0, t=2 puts the size gate at rho = 20, so the whole loop runs at desk
  // scale: all-zero matrices with a matching-shaped complement are
  // yes-instances of 0-EDMC.
  const int n = 24;
  PartialMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set(i, j, 0.0);
  for (int i = 0; i + 1 < n; i += 2) m.unset(i, i + 1);  // perfect matching mask
  CHECK_FALSE(detect_block_pattern(m, 2).has_value());
  const CompressOutcome out = compress_ktt(m, 0, 2, true);
  REQUIRE(out.kind == CompressOutcome::Kind::Reduced);
  CHECK(out.reduced.n() < 20);
  CHECK(out.reduced.n() + static_cast<int>(out.removed.size()) == n);

  // Planting a nonzero entry makes it a no-instance, caught by the checks.
  PartialMatrix bad = m;
  bad.set(2, 3, 1.0);
  const CompressOutcome no = compress_ktt(bad, 0, 2);
  REQUIRE(no.kind == CompressOutcome::Kind::Solved);
  CHECK_FALSE(no.answer_yes);
  CHECK_FALSE(embeddable(bad.submatrix(no.witness_clique), 0));
}

TEST_CASE("compress_ktt gates") {
  const CompressOutcome solved = compress_ktt(unit_simplex(3), 2, 2);
  REQUIRE(solved.kind == CompressOutcome::Kind::Solved);
  CHECK(solved.answer_yes);

  // Fully specified no-instance: a planted unit 4-simplex in the plane.
  const CompressOutcome no = compress_ktt(planted_simplex_cloud(12, 4), 2, 2);
  REQUIRE(no.kind == CompressOutcome::Kind::Solved);
  CHECK_FALSE(no.answer_yes);

  // Below the astronomical size gate everything passes through unchanged.
  const InstanceFile inst =
      gen_masked_pointcloud(40, 2, MaskModel::per_row_budget(1), 5);
  const CompressOutcome gate = compress_ktt(inst.matrix, 2, 2);
  REQUIRE(gate.kind == CompressOutcome::Kind::Reduced);
  CHECK(gate.reduced == inst.matrix);

  // The verify flag runs the block-pattern detector.
  PartialMatrix blocky(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) blocky.set(i, j, 1.0);
  blocky.unset(0, 3);
  blocky.unset(0, 4);
  blocky.unset(1, 3);
  blocky.unset(1, 4);
  CHECK_THROWS_AS(compress_ktt(blocky, 2, 2, true), PreconditionViolated);
}

TEST_CASE("compress_cliquecover on two disjoint cliques") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const InstanceFile inst =
        gen_masked_pointcloud(30, 2, MaskModel::clique_cover(2), seed);
    const CliqueCover cover{inst.cliques};
    const CompressOutcome out = compress_cliquecover(inst.matrix, 2, cover);
    REQUIRE(out.kind == CompressOutcome::Kind::Reduced);
    CHECK(out.reduced.n() <= 12);  // (d+1)k^2
    CHECK(out.reduced == inst.matrix.submatrix(out.kept));
    const OracleResult reduced_oracle = oracle_solve(out.reduced, 2, {16, seed, 1, 600});
    CHECK(reduced_oracle.kind == OracleResult::Kind::Yes);
  }
}

TEST_CASE("compress_cliquecover no-instances and gates") {
  // A cover clique that needs three dimensions sinks the instance at d=2.
  std::mt19937_64 rng(21);
  PartialMatrix m = matrix_of_points(random_points(9, 2, rng));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m.set(i, j, 1.0);  // unit 3-simplex
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j)
      if ((i < 4) != (j < 4)) m.unset(i, j);
  std::vector<int> first{0, 1, 2, 3}, second{4, 5, 6, 7, 8};
  const CompressOutcome no = compress_cliquecover(m, 2, CliqueCover{{first, second}});
  REQUIRE(no.kind == CompressOutcome::Kind::Solved);
  CHECK_FALSE(no.answer_yes);
  CHECK(no.witness_clique == first);

  // Size gate: small instances pass through (isolated vertices excepted).
  PartialMatrix small(6);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) small.set(i, j, 1.0);
  for (int i = 3; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) small.set(i, j, 2.0);
  const CompressOutcome gate =
      compress_cliquecover(small, 2, CliqueCover{{{0, 1, 2}, {3, 4, 5}}});
  REQUIRE(gate.kind == CompressOutcome::Kind::Reduced);
  CHECK(gate.reduced == small);

  // Invalid covers are rejected.
  CHECK_THROWS_AS(compress_cliquecover(small, 2, CliqueCover{{{0, 1, 2}}}), InvalidCover);
  PartialMatrix sparse(3);
  sparse.set(0, 1, 1.0);
  CHECK_THROWS_AS(compress_cliquecover(sparse, 2, CliqueCover{{{0, 1, 2}}}), InvalidCover);
}

TEST_CASE("compress_cliquecover removes isolated vertices up front") {
  PartialMatrix m(8);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) m.set(i, j, 1.0);
  // Vertices 3..7 are isolated.
  const CompressOutcome out = compress_cliquecover(m, 2, CliqueCover{{{0, 1, 2}}});
  // After shedding the isolated vertices the rest is fully specified.
  REQUIRE(out.kind == CompressOutcome::Kind::Solved);
  CHECK(out.answer_yes);
  CHECK(out.removed == std::vector<int>{3, 4, 5, 6, 7});
}

TEST_CASE("edge_clique_cover_search") {
  {
    UnderlyingGraph tri(3);
    tri.add_edge(0, 1);
    tri.add_edge(1, 2);
    tri.add_edge(0, 2);
    const auto cover = edge_clique_cover_search(tri, 3);
    REQUIRE(cover.has_value());
    CHECK(cover->cliques == std::vector<std::vector<int>>{{0, 1, 2}});
  }
  {
    UnderlyingGraph two(6);
    for (int base : {0, 3})
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) two.add_edge(base + i, base + j);
    const auto cover = edge_clique_cover_search(two, 3);
    REQUIRE(cover.has_value());
    CHECK(cover->cliques.size() == 2);
  }
  {
    UnderlyingGraph c5(5);
    for (int i = 0; i < 5; ++i) c5.add_edge(i, (i + 1) % 5);
    CHECK_FALSE(edge_clique_cover_search(c5, 4).has_value());
    const auto cover = edge_clique_cover_search(c5, 5);
    REQUIRE(cover.has_value());
    CHECK(cover->cliques.size() == 5);
    CHECK_THROWS_AS(edge_clique_cover_search(c5, 7), PreconditionViolated);
  }
}

TEST_CASE("compression determinism") {
  const InstanceFile inst =
      gen_masked_pointcloud(30, 2, MaskModel::per_row_budget(2), 99);
  const CompressOutcome a = compress_maxdeg(inst.matrix, 2, 2);
  const CompressOutcome b = compress_maxdeg(inst.matrix, 2, 2);
  REQUIRE(a.kind == CompressOutcome::Kind::Reduced);
  CHECK(a.removed == b.removed);
  CHECK(a.reduced == b.reduced);
}
