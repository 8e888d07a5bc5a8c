#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "edmc/edm_core.hpp"
#include "edmc/partial_matrix.hpp"

namespace edmc {

/// Vertex order such that each vertex's later neighbors form a clique
/// (perfect elimination ordering); exists iff the graph is chordal.
struct EliminationOrdering {
  std::vector<int> order;  // order[0] is eliminated first
};

/// Chordless cycle of length >= 4, in cycle order.
struct ChordlessCycle {
  std::vector<int> vertices;
};

using ChordalityResult = std::variant<EliminationOrdering, ChordlessCycle>;

/// Maximum-cardinality search followed by verification of the resulting
/// ordering; on failure returns a chordless cycle witness.
ChordalityResult is_chordal(const UnderlyingGraph& g);

inline bool chordal(const UnderlyingGraph& g) {
  return std::holds_alternative<EliminationOrdering>(is_chordal(g));
}

/// True iff `order` is a perfect elimination ordering of g.
bool verify_elimination_ordering(const UnderlyingGraph& g, const std::vector<int>& order);

/// All maximal cliques of a chordal graph, from the elimination ordering;
/// sorted canonically (each ascending, list lexicographic). Throws NotChordal
/// if the supplied ordering fails verification.
std::vector<std::vector<int>> maximal_cliques_chordal(const UnderlyingGraph& g,
                                                      const EliminationOrdering& ordering);

/// Set of non-edges whose addition makes the graph chordal.
struct FillIn {
  std::vector<std::pair<int, int>> edges;
};

struct FillInOptions {
  long node_budget = 2'000'000;
};

/// Minimum-size fill-in of size <= kmax, or nullopt if none exists. Branches
/// on the chords of a chordless-cycle witness with iterative deepening, so
/// the first solution found has minimum size. Desk scale: kmax <= 8.
std::optional<FillIn> min_fill_in(const UnderlyingGraph& g, int kmax,
                                  const FillInOptions& opts = {});

/// Clique-wise d-embeddability decision for a chordal instance: yes iff every
/// maximal clique's principal submatrix is d-embeddable.
struct ChordalCheckResult {
  bool yes = false;
  std::vector<int> witness_clique;  // failing clique on no
};

ChordalCheckResult chordal_edm_check(const PartialMatrix& m, int d,
                                     const Tolerances& tol = Tolerances::defaults());

/// Constructive completion for chordal instances: realizes a clique tree walk
/// and reads the completed matrix off the point set. Specified entries are
/// copied bit-for-bit. On failure returns the witness clique of the check.
struct ChordalCompletion {
  bool yes = false;
  PartialMatrix completion;      // complete on yes
  Eigen::MatrixXd points;        // n x d realization of the completion
  std::vector<int> witness_clique;
};

ChordalCompletion chordal_complete(const PartialMatrix& m, int d,
                                   const Tolerances& tol = Tolerances::defaults());

/// Clique tree (running intersection property) of a chordal graph's maximal
/// cliques: parent links into the canonical clique list, -1 for roots.
std::vector<int> clique_tree_parents(const UnderlyingGraph& g,
                                     const std::vector<std::vector<int>>& cliques);

}  // namespace edmc
