#pragma once

#include <optional>
#include <vector>

#include "edmc/edm_core.hpp"
#include "edmc/partial_matrix.hpp"

namespace edmc {

/// Result of a compression pass: either the instance was decided outright or
/// it was shrunk to an equivalent principal submatrix.
struct CompressOutcome {
  enum class Kind { Solved, Reduced };
  Kind kind = Kind::Reduced;

  // Solved:
  bool answer_yes = false;
  std::optional<Realization> realization;   // certificate on yes
  std::vector<int> witness_clique;          // failing clique on no (original indices)

  // Reduced:
  PartialMatrix reduced;
  std::vector<int> kept;     // original indices of the reduced rows, ascending
  std::vector<int> removed;  // original indices in removal order
};

/// A t-by-t all-unspecified submatrix on disjoint row/column index sets.
struct BlockPatternWitness {
  std::vector<int> rows, cols;
};

/// Cliques of the underlying graph covering every specified off-diagonal
/// pair, each inducing a fully specified principal submatrix.
struct CliqueCover {
  std::vector<std::vector<int>> cliques;
};

struct SearchOptions {
  long node_budget = 5'000'000;
};

/// Exhaustive search (pruned by unspecified-degree) for a t-block pattern.
/// Intended for desk-scale t <= 4. Returns a witness or nullopt.
std::optional<BlockPatternWitness> detect_block_pattern(const PartialMatrix& m, int t,
                                                        const SearchOptions& opts = {});

/// Parameter functions of the block-pattern compression.
long long eta_ktt(int d, int t);  // (d+1)t + (t-1)(d+1)^(t+1) + 1
long long rho_ktt(int d, int t);  // binom(2t + eta - 2, 2t - 1), saturating

/// Constructive Ramsey extraction: an independent set of `gbar` of size
/// >= target, assuming gbar has no clique of size `no_clique` (the caller's
/// guarantee; a violation surfaces as TargetUnreachable).
std::vector<int> ramsey_independent_set(const UnderlyingGraph& gbar, int no_clique,
                                        int target);

/// Protected-set schedule for the shared irrelevant-vertex finder: first
/// `peel_rounds` bases are peeled off X itself (each a metric basis of what
/// remains of X), then one basis per explicit section.
struct IrrelevantSchedule {
  int peel_rounds = 0;
  std::vector<std::vector<int>> sections;
};

/// Smallest index of X outside every protected basis, or nullopt if the
/// protected sets exhaust X. X must index a fully specified d-embeddable
/// principal submatrix.
std::optional<int> find_irrelevant_in_clique(const PartialMatrix& m,
                                             const std::vector<int>& clique, int d,
                                             const IrrelevantSchedule& schedule,
                                             const Tolerances& tol = Tolerances::defaults());

/// Compression for matrices excluding a t-block pattern. The precondition is
/// trusted from the caller by default; pass verify=true to run
/// detect_block_pattern first (desk scale only).
CompressOutcome compress_ktt(const PartialMatrix& m, int d, int t, bool verify = false,
                             const Tolerances& tol = Tolerances::defaults());

/// Compression for matrices with at most `max_unspecified` unspecified
/// entries per row. Output order is at most (d+1)(max_unspecified+1)^2.
CompressOutcome compress_maxdeg(const PartialMatrix& m, int d, int max_unspecified,
                                const Tolerances& tol = Tolerances::defaults());

/// Compression given an edge clique cover of size k. Output order is at most
/// (d+1)k^2.
CompressOutcome compress_cliquecover(const PartialMatrix& m, int d, const CliqueCover& cover,
                                     const Tolerances& tol = Tolerances::defaults());

/// Exhaustive branch-and-bound edge clique cover of size <= kmax (kmax <= 6),
/// branching over maximal cliques containing the first uncovered edge.
std::optional<CliqueCover> edge_clique_cover_search(const UnderlyingGraph& g, int kmax,
                                                    const SearchOptions& opts = {});

}  // namespace edmc
