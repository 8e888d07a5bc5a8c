#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edmc/errors.hpp"

namespace edmc {

/// Symmetric hollow n-by-n matrix of squared distances with optional entries.
/// The diagonal is always specified and zero; off-diagonal entries are either
/// unspecified or a nonnegative real, stored symmetrically.
class PartialMatrix {
 public:
  PartialMatrix() = default;

  // All off-diagonal entries start unspecified.
  explicit PartialMatrix(int n);

  // Fully specified matrix from a dense value grid (must be symmetric hollow).
  static PartialMatrix complete_from(int n, const std::vector<double>& values);

  int n() const { return n_; }

  bool specified(int i, int j) const { return spec_[idx(i, j)] != 0; }

  // Value of a specified entry; throws UnspecifiedEntry otherwise.
  double at(int i, int j) const {
    if (!specified(i, j)) throw UnspecifiedEntry(i, j);
    return val_[idx(i, j)];
  }

  std::optional<double> get(int i, int j) const {
    if (!specified(i, j)) return std::nullopt;
    return val_[idx(i, j)];
  }

  // Sets both (i,j) and (j,i). Requires i != j and v >= 0.
  void set(int i, int j, double v);

  // Marks an off-diagonal pair unspecified again.
  void unset(int i, int j);

  bool is_complete() const;

  // Number of unspecified off-diagonal unordered pairs.
  int unspecified_pair_count() const;

  // Unspecified off-diagonal entries in row i (counting each column once).
  int row_unspecified(int i) const;

  double max_abs_entry() const;

  // Principal submatrix on the given (distinct) indices, in the given order.
  PartialMatrix submatrix(const std::vector<int>& indices) const;

  // Matrix with one row/column removed.
  PartialMatrix remove_index(int i) const;

  bool operator==(const PartialMatrix& o) const {
    return n_ == o.n_ && spec_ == o.spec_ && val_ == o.val_;
  }

 private:
  int idx(int i, int j) const { return i * n_ + j; }

  int n_ = 0;
  std::vector<double> val_;
  std::vector<std::uint8_t> spec_;
};

/// Adjacency view of a partial matrix: vertices are indices, edges are the
/// specified off-diagonal pairs.
class UnderlyingGraph {
 public:
  UnderlyingGraph() = default;
  explicit UnderlyingGraph(int n) : n_(n), adj_(n, std::vector<std::uint8_t>(n, 0)) {}

  static UnderlyingGraph of(const PartialMatrix& m);

  int n() const { return n_; }
  bool edge(int u, int v) const { return u != v && adj_[u][v] != 0; }

  void add_edge(int u, int v) {
    if (u == v) return;
    adj_[u][v] = adj_[v][u] = 1;
  }
  void remove_edge(int u, int v) {
    adj_[u][v] = adj_[v][u] = 0;
  }

  std::vector<int> neighbors(int v) const;
  int degree(int v) const;
  bool is_clique(const std::vector<int>& vs) const;
  bool is_complete() const;

  UnderlyingGraph complement() const;
  UnderlyingGraph induced(const std::vector<int>& vs) const;
  UnderlyingGraph remove_vertex(int v) const;

  std::vector<std::vector<int>> connected_components() const;

  // All maximal cliques (Bron-Kerbosch with pivot), sorted canonically:
  // each clique ascending, the list lexicographic.
  std::vector<std::vector<int>> maximal_cliques() const;

  std::vector<std::pair<int, int>> edges() const;
  std::vector<std::pair<int, int>> non_edges() const;

 private:
  int n_ = 0;
  std::vector<std::vector<std::uint8_t>> adj_;
};

/// Thresholds for the tolerance-based exact decisions. All comparisons are
/// made scale-relative: `scale` is the largest specified |entry| of the
/// matrix at hand (entries may be large integers, so absolute thresholds
/// would not survive rescaling).
struct Tolerances {
  double eig = 1e-9;   // eigenvalue threshold, times scale
  double cm = 1e-9;    // Cayley-Menger sign threshold, times scale^(points-1)
  double real = 1e-7;  // realization residual bound, times max(1, scale)
  double atom = 1e-7;  // atom-satisfaction slack, times the atom's own scale

  static const Tolerances& defaults();

  double eig_threshold(double scale) const;
  double cm_threshold(double scale, int npoints) const;
  double real_threshold(double scale) const;
};

}  // namespace edmc
