#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edmc/compress.hpp"
#include "edmc/edm_core.hpp"
#include "edmc/partial_matrix.hpp"

namespace edmc {

/// On-disk instance: the partial matrix, the target dimension, and optional
/// provenance metadata (generator line, seed, ground-truth points, cover).
/// Solvers must never read the metadata; use load_redacted for solver paths.
struct InstanceFile {
  PartialMatrix matrix;
  int d = 0;
  std::optional<Eigen::MatrixXd> points;  // ground truth, n x dim
  std::string generator;
  std::optional<std::uint64_t> seed;
  std::vector<std::vector<int>> cliques;  // optional cover metadata
};

InstanceFile parse_instance(const std::string& text);
std::string serialize_instance(const InstanceFile& inst);

InstanceFile load_instance(const std::string& path);
void save_instance(const std::string& path, const InstanceFile& inst);

struct RedactedInstance {
  PartialMatrix matrix;
  int d = 0;
};

/// Loader for solver paths: strips every metadata field.
RedactedInstance load_redacted(const std::string& path);

/// Mask shapes for the point-cloud generator. Generated masks are verified
/// against their defining property after generation.
struct MaskModel {
  enum class Kind { PerRowBudget, BlockFree, ChordalGraph, CliqueCover, ExplicitGraph };
  Kind kind = Kind::PerRowBudget;
  int per_row = 1;       // PerRowBudget
  int t = 2;             // BlockFree
  int k = 2;             // CliqueCover
  UnderlyingGraph graph; // ExplicitGraph

  static MaskModel per_row_budget(int delta) { return {Kind::PerRowBudget, delta, 2, 2, {}}; }
  static MaskModel block_free(int t) { return {Kind::BlockFree, 1, t, 2, {}}; }
  static MaskModel chordal_graph() { return {Kind::ChordalGraph, 1, 2, 2, {}}; }
  static MaskModel clique_cover(int k) { return {Kind::CliqueCover, 1, 2, k, {}}; }
  static MaskModel explicit_graph(UnderlyingGraph g) {
    MaskModel m{Kind::ExplicitGraph, 1, 2, 2, std::move(g)};
    return m;
  }
};

/// Samples n points uniformly in [0,1]^d, hides entries per the mask, and
/// stores the ground truth in metadata. Always a yes-instance.
InstanceFile gen_masked_pointcloud(int n, int d, const MaskModel& mask, std::uint64_t seed);

/// Connected edge-weighted graph with weights in {1,2,3,4}.
struct WeightedGraph {
  int n = 0;
  std::vector<std::tuple<int, int, int>> edges;  // (u, v, weight)
};

/// The dense-instance construction: vertices moved onto a circle of radius
/// r = 2^4 n^4 with chord lengths integral by choice of the angle, plus
/// ceil(n^2 / (2 eps)) coincident anchor points at squared distance r^2 from
/// every vertex. Output dimension is 2.
InstanceFile gen_saxe(const WeightedGraph& g, double eps);

/// Parameters the generator derives; exposed for tests and reports.
struct SaxeParams {
  long long r;
  int s;
  int total;  // n + s
};
SaxeParams saxe_params(int n, double eps);

struct OracleOptions {
  int restarts = 64;
  std::uint64_t seed = 0;
  int threads = 1;
  int max_iterations = 600;
};

/// Independent cross-validation oracle: multi-start minimization over point
/// coordinates of the squared-residual sum. Yes answers carry points; a no
/// is certified only by a clique whose fully specified submatrix fails
/// realize, otherwise the outcome is Unknown.
struct OracleResult {
  enum class Kind { Yes, NoCertified, Unknown };
  Kind kind = Kind::Unknown;
  Eigen::MatrixXd points;           // on yes
  std::vector<int> witness_clique;  // on certified no
  int restarts_used = 0;
};

OracleResult oracle_solve(const PartialMatrix& m, int d, const OracleOptions& opts = {},
                          const Tolerances& tol = Tolerances::defaults());

}  // namespace edmc
