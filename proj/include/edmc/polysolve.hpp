#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "edmc/chordal.hpp"
#include "edmc/edm_core.hpp"
#include "edmc/polynomial.hpp"

namespace edmc {

/// Polynomial atom: relation of an augmented Cayley-Menger polynomial (or a
/// plain variable bound) against zero.
struct Atom {
  enum class Rel { EqZero, Gt, Ge };
  AugmentedPolynomial poly;
  Rel rel = Rel::EqZero;
};

/// Conjunction/disjunction tree over atoms. No negations appear: the
/// constructions only use AND/OR. An empty AND is true, an empty OR false.
struct Formula {
  enum class Kind { Leaf, And, Or };
  Kind kind = Kind::And;
  Atom atom;                       // Leaf only
  std::vector<Formula> children;   // And/Or

  static Formula leaf(Atom a) {
    Formula f;
    f.kind = Kind::Leaf;
    f.atom = std::move(a);
    return f;
  }
  static Formula conj(std::vector<Formula> ch) {
    Formula f;
    f.kind = Kind::And;
    f.children = std::move(ch);
    return f;
  }
  static Formula disj(std::vector<Formula> ch) {
    Formula f;
    f.kind = Kind::Or;
    f.children = std::move(ch);
    return f;
  }
  static Formula always_true() { return conj({}); }
  static Formula always_false() { return disj({}); }

  int atom_count() const;
};

/// Map from indeterminates to nonnegative reals, indexed like the VarTable.
struct Assignment {
  std::vector<double> values;
};

/// A formula bundled with its variable registry and the scale information the
/// backend needs for the box bound and tolerances.
struct FormulaProblem {
  VarTable vars;
  Formula formula;
  double entry_scale = 1.0;  // max specified entry of the source matrix
  bool split_pairs = false;
};

/// The conjunction of atoms asserting that Y is a metric basis of the
/// completed matrix and every other point depends on it (atom kinds: the
/// sign-alternating prefix determinants, the one- and two-point vanishing
/// determinants, and variable nonnegativity). Z spans all non-edges.
FormulaProblem build_basis_guess_formula(const PartialMatrix& m, const std::vector<int>& y,
                                         int d, bool split_pairs = false,
                                         const Tolerances& tol = Tolerances::defaults());

/// The fill-in decision formula: one disjunction per maximal clique of the
/// triangulated graph over the admissible basis extensions, conjoined.
/// Short-circuits to an always-false formula when some clique's specified
/// part already needs more than d+1 basis points.
FormulaProblem build_fillin_formula(const PartialMatrix& m, const FillIn& fill, int d,
                                    bool split_pairs = false,
                                    const Tolerances& tol = Tolerances::defaults());

struct DecideOptions {
  int restarts = 64;
  int max_iterations = 260;
  long refute_boxes = 4000;  // interval-subdivision budget
  double box_factor = 4.0;   // box upper bound, times the entry scale
};

/// Existential decision over the nonnegative box. Sat answers carry a
/// verified assignment (every atom within its slack, strict atoms with
/// strict margin). Unsat is certified only for variable-free formulas or by
/// interval refutation over the (escalated) box; everything else is Unknown.
struct DecideResult {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  Assignment assignment;
};

DecideResult decide_exists(const FormulaProblem& problem, const DecideOptions& opts = {},
                           const Tolerances& tol = Tolerances::defaults());

/// Checks an assignment against every atom at the problem's tolerance.
bool verify_assignment(const FormulaProblem& problem, const std::vector<double>& values,
                       const Tolerances& tol = Tolerances::defaults());

struct SolveOutcome {
  enum class Answer { Yes, No, Unknown };
  Answer answer = Answer::Unknown;
  std::optional<PartialMatrix> completion;  // on yes
  std::optional<Realization> realization;   // on yes
  std::string note;
};

struct SolveOptions {
  int kmax = 4;
  DecideOptions decide;
};

/// Decision through the minimum fill-in route: triangulate, build the clique
/// formulas, decide, and on Sat finish with the chordal completion.
SolveOutcome solve_fillin(const PartialMatrix& m, int d, const SolveOptions& opts = {},
                          const Tolerances& tol = Tolerances::defaults());

/// Exhaustive metric-basis guessing (desk scale): every subset Y of size at
/// most d+1 in canonical order; yes on the first verified Sat.
SolveOutcome solve_exact(const PartialMatrix& m, int d, const SolveOptions& opts = {},
                         const Tolerances& tol = Tolerances::defaults());

}  // namespace edmc
