#pragma once

#include <map>
#include <string>
#include <vector>

#include "edmc/partial_matrix.hpp"

namespace edmc {

/// One indeterminate standing for an unspecified entry. In the collapsed
/// (default) encoding there is one variable per unordered pair {u,v}; the
/// split encoding keeps two variables per pair, linked by equality atoms,
/// for fidelity testing.
struct Indeterminate {
  int u = 0, v = 0;  // u < v for collapsed variables; ordered for split ones
};

/// Registry mapping matrix pairs to variable ids.
class VarTable {
 public:
  VarTable() = default;

  // Registers (or finds) the collapsed variable of the unordered pair.
  int pair_var(int u, int v);
  // Registers (or finds) the split variable of the ordered pair.
  int ordered_var(int u, int v);

  // Lookup without registration; -1 if absent.
  int find_pair(int u, int v) const;
  int find_ordered(int u, int v) const;

  int size() const { return static_cast<int>(vars_.size()); }
  const Indeterminate& var(int id) const { return vars_[id]; }
  const std::vector<Indeterminate>& vars() const { return vars_; }

  std::string name(int id) const;

 private:
  std::vector<Indeterminate> vars_;
  std::map<std::pair<int, int>, int> index_;
};

/// Closed interval, used for range evaluation over a variable box.
struct Interval {
  double lo = 0.0, hi = 0.0;
};

/// Multivariate polynomial over the indeterminates, stored as a canonical
/// sorted term list: each monomial is a sorted (variable, exponent) vector.
class AugmentedPolynomial {
 public:
  using Monomial = std::vector<std::pair<int, int>>;

  AugmentedPolynomial() = default;
  static AugmentedPolynomial constant(double c);
  static AugmentedPolynomial variable(int var_id);

  AugmentedPolynomial operator+(const AugmentedPolynomial& o) const;
  AugmentedPolynomial operator-(const AugmentedPolynomial& o) const;
  AugmentedPolynomial operator*(const AugmentedPolynomial& o) const;
  AugmentedPolynomial scaled(double c) const;

  bool is_constant() const;
  double constant_value() const;  // valid when is_constant()
  int degree() const;

  double eval(const std::vector<double>& values) const;
  // d/dz_k for every k, accumulated into grad (sized to the variable count).
  void eval_gradient(const std::vector<double>& values, double weight,
                     std::vector<double>& grad) const;
  Interval eval_interval(const std::vector<Interval>& box) const;

  // Largest |value| the polynomial can reach over [0, hi]^vars; used as the
  // scale of atom tolerances.
  double magnitude_bound(double hi) const;

  const std::map<Monomial, double>& terms() const { return terms_; }
  std::vector<int> variables() const;

 private:
  std::map<Monomial, double> terms_;
};

/// Symbolic Cayley-Menger determinant: entries of the bordered matrix are
/// constants for specified pairs and single variables for pairs housed in z.
/// Throws UnhousedPair when a pair is neither. When `split_pairs` is set,
/// positions (i,j) and (j,i) get separate ordered variables.
AugmentedPolynomial build_augmented_cm(const PartialMatrix& m, const std::vector<int>& indices,
                                       VarTable& vars, bool split_pairs = false);

}  // namespace edmc
