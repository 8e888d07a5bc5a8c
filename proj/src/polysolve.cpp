#include "edmc/polysolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace edmc {

int Formula::atom_count() const {
  if (kind == Kind::Leaf) return 1;
  int c = 0;
  for (const Formula& ch : children) c += ch.atom_count();
  return c;
}

namespace {

// Registers the indeterminates of the given non-edge pairs.
void register_pairs(VarTable& vars, const std::vector<std::pair<int, int>>& pairs,
                    bool split) {
  for (const auto& [u, v] : pairs) {
    if (split) {
      vars.ordered_var(u, v);
      vars.ordered_var(v, u);
    } else {
      vars.pair_var(u, v);
    }
  }
}

// Atoms (D) and, in split mode, (E) for the given pairs.
void append_variable_atoms(const VarTable& vars, const std::vector<std::pair<int, int>>& pairs,
                           bool split, std::vector<Formula>& out) {
  for (const auto& [u, v] : pairs) {
    if (split) {
      const int zf = vars.find_ordered(u, v), zb = vars.find_ordered(v, u);
      out.push_back(Formula::leaf({AugmentedPolynomial::variable(zf), Atom::Rel::Ge}));
      out.push_back(Formula::leaf({AugmentedPolynomial::variable(zb), Atom::Rel::Ge}));
      out.push_back(Formula::leaf({AugmentedPolynomial::variable(zf) -
                                       AugmentedPolynomial::variable(zb),
                                   Atom::Rel::EqZero}));
    } else {
      out.push_back(Formula::leaf(
          {AugmentedPolynomial::variable(vars.find_pair(u, v)), Atom::Rel::Ge}));
    }
  }
}

// The conjunction asserting that `basis` (in order) is a metric basis of the
// completion restricted to `universe`: alternating-sign prefixes plus the
// vanishing one- and two-point extensions.
std::vector<Formula> basis_atoms(const PartialMatrix& m, VarTable& vars,
                                 const std::vector<int>& basis,
                                 const std::vector<int>& universe, bool split) {
  std::vector<Formula> atoms;
  // (A) (-1)^(j+1) CM(x_0..x_j) > 0 for 1 <= j <= r.
  for (size_t j = 1; j < basis.size(); ++j) {
    const std::vector<int> prefix(basis.begin(), basis.begin() + j + 1);
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    atoms.push_back(Formula::leaf(
        {build_augmented_cm(m, prefix, vars, split).scaled(sign), Atom::Rel::Gt}));
  }
  std::vector<int> rest;
  for (int v : universe)
    if (std::find(basis.begin(), basis.end(), v) == basis.end()) rest.push_back(v);
  // (B) CM(basis, x) = 0.
  for (int x : rest) {
    std::vector<int> idx = basis;
    idx.push_back(x);
    atoms.push_back(
        Formula::leaf({build_augmented_cm(m, idx, vars, split), Atom::Rel::EqZero}));
  }
  // (C) CM(basis, x, y) = 0.
  for (size_t a = 0; a < rest.size(); ++a)
    for (size_t b = a + 1; b < rest.size(); ++b) {
      std::vector<int> idx = basis;
      idx.push_back(rest[a]);
      idx.push_back(rest[b]);
      atoms.push_back(
          Formula::leaf({build_augmented_cm(m, idx, vars, split), Atom::Rel::EqZero}));
    }
  return atoms;
}

}  // namespace

FormulaProblem build_basis_guess_formula(const PartialMatrix& m, const std::vector<int>& y,
                                         int d, bool split_pairs, const Tolerances& tol) {
  (void)tol;
  if (static_cast<int>(y.size()) > d + 1)
    throw PreconditionViolated("basis guess larger than d+1");
  FormulaProblem p;
  p.split_pairs = split_pairs;
  p.entry_scale = m.max_abs_entry();
  const auto non_edges = UnderlyingGraph::of(m).non_edges();
  register_pairs(p.vars, non_edges, split_pairs);
  std::vector<int> universe(m.n());
  for (int i = 0; i < m.n(); ++i) universe[i] = i;
  std::vector<Formula> atoms = basis_atoms(m, p.vars, y, universe, split_pairs);
  append_variable_atoms(p.vars, non_edges, split_pairs, atoms);
  p.formula = Formula::conj(std::move(atoms));
  return p;
}

FormulaProblem build_fillin_formula(const PartialMatrix& m, const FillIn& fill, int d,
                                    bool split_pairs, const Tolerances& tol) {
  FormulaProblem p;
  p.split_pairs = split_pairs;
  p.entry_scale = m.max_abs_entry();
  UnderlyingGraph filled = UnderlyingGraph::of(m);
  for (const auto& [u, v] : fill.edges) filled.add_edge(u, v);
  const ChordalityResult ord = is_chordal(filled);
  if (!std::holds_alternative<EliminationOrdering>(ord))
    throw NotChordal("fill-in does not triangulate the graph");
  const auto cliques = maximal_cliques_chordal(filled, std::get<EliminationOrdering>(ord));
  register_pairs(p.vars, fill.edges, split_pairs);

  std::vector<Formula> conjuncts;
  for (const auto& clique : cliques) {
    // Fill edges inside this clique and their endpoints.
    std::vector<std::pair<int, int>> z_i;
    std::vector<int> vx;
    for (const auto& [u, v] : fill.edges) {
      const bool hu = std::binary_search(clique.begin(), clique.end(), u);
      const bool hv = std::binary_search(clique.begin(), clique.end(), v);
      if (hu && hv) {
        z_i.emplace_back(u, v);
        vx.push_back(u);
        vx.push_back(v);
      }
    }
    std::sort(vx.begin(), vx.end());
    vx.erase(std::unique(vx.begin(), vx.end()), vx.end());
    std::vector<int> specified_part;
    for (int v : clique)
      if (!std::binary_search(vx.begin(), vx.end(), v)) specified_part.push_back(v);

    std::vector<int> base;
    if (!specified_part.empty()) {
      EmbeddingClass cls = classify_embedding(m.submatrix(specified_part), tol);
      if (!cls.is_edm) {
        p.formula = Formula::always_false();
        return p;
      }
      for (int local : cls.basis) base.push_back(specified_part[local]);
    }
    if (static_cast<int>(base.size()) > d + 1) {
      p.formula = Formula::always_false();
      return p;
    }
    // One disjunct per admissible extension Y of the specified-part basis.
    const int room = d + 1 - static_cast<int>(base.size());
    std::vector<Formula> disjuncts;
    std::vector<std::vector<int>> ys{{}};
    for (int size = 1; size <= std::min<int>(room, static_cast<int>(vx.size())); ++size) {
      // All ascending index combinations from vx.
      std::vector<int> comb(size);
      for (int i = 0; i < size; ++i) comb[i] = i;
      while (true) {
        std::vector<int> y;
        for (int i : comb) y.push_back(vx[i]);
        ys.push_back(y);
        int pos = size - 1;
        while (pos >= 0 && comb[pos] == static_cast<int>(vx.size()) - size + pos) --pos;
        if (pos < 0) break;
        ++comb[pos];
        for (int i = pos + 1; i < size; ++i) comb[i] = comb[i - 1] + 1;
      }
    }
    for (const auto& y : ys) {
      std::vector<int> guess = base;
      guess.insert(guess.end(), y.begin(), y.end());
      if (guess.empty()) continue;
      std::vector<Formula> atoms = basis_atoms(m, p.vars, guess, clique, split_pairs);
      append_variable_atoms(p.vars, z_i, split_pairs, atoms);
      disjuncts.push_back(Formula::conj(std::move(atoms)));
    }
    conjuncts.push_back(Formula::disj(std::move(disjuncts)));
  }
  p.formula = Formula::conj(std::move(conjuncts));
  return p;
}

namespace {

struct AtomRef {
  const Atom* atom;
  double slack;  // tolerance at the problem scale
};

// Flattened view used by the penalty minimizer: per OR node only the child
// with the smallest penalty participates.
struct Evaluator {
  const FormulaProblem& problem;
  double box_hi;
  Tolerances tol;

  double atom_slack(const Atom& a) const {
    return tol.atom * a.poly.magnitude_bound(box_hi);
  }

  double atom_penalty(const Atom& a, const std::vector<double>& z) const {
    const double v = a.poly.eval(z);
    const double s = atom_slack(a);
    switch (a.rel) {
      case Atom::Rel::EqZero:
        return v * v;
      case Atom::Rel::Gt: {
        const double gap = 2.0 * s - v;  // aim for a strict margin
        return gap > 0 ? gap * gap : 0.0;
      }
      case Atom::Rel::Ge:
        return v < 0 ? v * v : 0.0;
    }
    return 0.0;
  }

  void atom_gradient(const Atom& a, const std::vector<double>& z,
                     std::vector<double>& grad) const {
    const double v = a.poly.eval(z);
    const double s = atom_slack(a);
    switch (a.rel) {
      case Atom::Rel::EqZero:
        a.poly.eval_gradient(z, 2.0 * v, grad);
        break;
      case Atom::Rel::Gt: {
        const double gap = 2.0 * s - v;
        if (gap > 0) a.poly.eval_gradient(z, -2.0 * gap, grad);
        break;
      }
      case Atom::Rel::Ge:
        if (v < 0) a.poly.eval_gradient(z, 2.0 * v, grad);
        break;
    }
  }

  double penalty(const Formula& f, const std::vector<double>& z) const {
    switch (f.kind) {
      case Formula::Kind::Leaf:
        return atom_penalty(f.atom, z);
      case Formula::Kind::And: {
        double acc = 0.0;
        for (const Formula& ch : f.children) acc += penalty(ch, z);
        return acc;
      }
      case Formula::Kind::Or: {
        if (f.children.empty()) return 1.0;  // unsatisfiable disjunct
        double best = penalty(f.children[0], z);
        for (size_t i = 1; i < f.children.size(); ++i)
          best = std::min(best, penalty(f.children[i], z));
        return best;
      }
    }
    return 0.0;
  }

  void gradient(const Formula& f, const std::vector<double>& z,
                std::vector<double>& grad) const {
    switch (f.kind) {
      case Formula::Kind::Leaf:
        atom_gradient(f.atom, z, grad);
        break;
      case Formula::Kind::And:
        for (const Formula& ch : f.children) gradient(ch, z, grad);
        break;
      case Formula::Kind::Or: {
        if (f.children.empty()) break;
        size_t best = 0;
        double bv = penalty(f.children[0], z);
        for (size_t i = 1; i < f.children.size(); ++i) {
          const double v = penalty(f.children[i], z);
          if (v < bv) {
            bv = v;
            best = i;
          }
        }
        gradient(f.children[best], z, grad);
        break;
      }
    }
  }

  // Active equality/hinge atoms along the current best disjuncts, for the
  // Gauss-Newton polish.
  void active_atoms(const Formula& f, const std::vector<double>& z,
                    std::vector<const Atom*>& out) const {
    switch (f.kind) {
      case Formula::Kind::Leaf:
        out.push_back(&f.atom);
        break;
      case Formula::Kind::And:
        for (const Formula& ch : f.children) active_atoms(ch, z, out);
        break;
      case Formula::Kind::Or: {
        if (f.children.empty()) break;
        size_t best = 0;
        double bv = penalty(f.children[0], z);
        for (size_t i = 1; i < f.children.size(); ++i) {
          const double v = penalty(f.children[i], z);
          if (v < bv) {
            bv = v;
            best = i;
          }
        }
        active_atoms(f.children[best], z, out);
        break;
      }
    }
  }

  bool satisfied(const Formula& f, const std::vector<double>& z) const {
    switch (f.kind) {
      case Formula::Kind::Leaf: {
        const double v = f.atom.poly.eval(z);
        const double s = atom_slack(f.atom);
        switch (f.atom.rel) {
          case Atom::Rel::EqZero:
            return std::abs(v) <= s;
          case Atom::Rel::Gt:
            return v >= s;
          case Atom::Rel::Ge:
            return v >= -s;
        }
        return false;
      }
      case Formula::Kind::And:
        for (const Formula& ch : f.children)
          if (!satisfied(ch, z)) return false;
        return true;
      case Formula::Kind::Or:
        for (const Formula& ch : f.children)
          if (satisfied(ch, z)) return true;
        return false;
    }
    return false;
  }

  // Interval refutation of the subtree over a box, with bisection up to the
  // node budget. True means no point of the box satisfies the formula.
  bool refuted(const Formula& f, const std::vector<Interval>& box) const {
    switch (f.kind) {
      case Formula::Kind::Leaf: {
        const Interval r = f.atom.poly.eval_interval(box);
        switch (f.atom.rel) {
          case Atom::Rel::EqZero:
            return r.lo > 0.0 || r.hi < 0.0;
          case Atom::Rel::Gt:
            return r.hi <= 0.0;
          case Atom::Rel::Ge:
            return r.hi < 0.0;
        }
        return false;
      }
      case Formula::Kind::And:
        for (const Formula& ch : f.children)
          if (refuted(ch, box)) return true;
        return false;
      case Formula::Kind::Or:
        if (f.children.empty()) return true;
        for (const Formula& ch : f.children)
          if (!refuted(ch, box)) return false;
        return true;
    }
    return false;
  }

  bool refute_subdivide(const Formula& f, std::vector<Interval> box, long& budget) const {
    if (--budget < 0) return false;
    if (refuted(f, box)) return true;
    // Split the widest dimension; fail when the box is essentially a point.
    int widest = -1;
    double w = 0.0;
    for (size_t i = 0; i < box.size(); ++i)
      if (box[i].hi - box[i].lo > w) {
        w = box[i].hi - box[i].lo;
        widest = static_cast<int>(i);
      }
    if (widest < 0 || w <= 1e-9 * std::max(1.0, box_hi)) return false;
    const double mid = 0.5 * (box[widest].lo + box[widest].hi);
    std::vector<Interval> left = box, right = box;
    left[widest].hi = mid;
    right[widest].lo = mid;
    return refute_subdivide(f, std::move(left), budget) &&
           refute_subdivide(f, std::move(right), budget);
  }
};

// Deterministic quasi-random points: Halton sequence over the first primes.
double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

std::vector<double> halton_point(int index, int dim, double hi) {
  std::vector<double> z(dim);
  for (int k = 0; k < dim; ++k)
    z[k] = hi * halton(index + 1, kPrimes[k % (sizeof(kPrimes) / sizeof(int))]);
  return z;
}

void project_box(std::vector<double>& z, double hi) {
  for (double& v : z) v = std::clamp(v, 0.0, hi);
}

// Projected gradient descent with backtracking, then a Gauss-Newton polish
// on the active residuals.
bool minimize_from(const Evaluator& ev, std::vector<double>& z, int max_iterations) {
  const int dim = static_cast<int>(z.size());
  double fz = ev.penalty(ev.problem.formula, z);
  double step = 0.1 * std::max(1.0, ev.box_hi);
  std::vector<double> grad(dim), trial(dim);
  for (int it = 0; it < max_iterations && fz > 0.0; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    ev.gradient(ev.problem.formula, z, grad);
    double gnorm = 0.0;
    for (double g : grad) gnorm += g * g;
    gnorm = std::sqrt(gnorm);
    if (gnorm < 1e-300) break;
    bool improved = false;
    for (int bt = 0; bt < 30; ++bt) {
      for (int i = 0; i < dim; ++i) trial[i] = z[i] - (step / gnorm) * grad[i];
      project_box(trial, ev.box_hi);
      const double ft = ev.penalty(ev.problem.formula, trial);
      if (ft < fz) {
        z = trial;
        fz = ft;
        step *= 1.6;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  // Gauss-Newton on the active equalities and violated inequalities.
  for (int gn = 0; gn < 40; ++gn) {
    std::vector<const Atom*> atoms;
    ev.active_atoms(ev.problem.formula, z, atoms);
    std::vector<const Atom*> act;
    std::vector<double> resid;
    for (const Atom* a : atoms) {
      const double v = a->poly.eval(z);
      const double s = ev.atom_slack(*a);
      if (a->rel == Atom::Rel::EqZero)
        act.push_back(a), resid.push_back(v);
      else if (a->rel == Atom::Rel::Gt && v < 2.0 * s)
        act.push_back(a), resid.push_back(v - 2.0 * s);
      else if (a->rel == Atom::Rel::Ge && v < 0.0)
        act.push_back(a), resid.push_back(v);
    }
    if (act.empty()) break;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<int>(act.size()), dim);
    std::vector<double> row(dim);
    for (size_t r = 0; r < act.size(); ++r) {
      std::fill(row.begin(), row.end(), 0.0);
      act[r]->poly.eval_gradient(z, 1.0, row);
      for (int c = 0; c < dim; ++c) jac(static_cast<int>(r), c) = row[c];
    }
    Eigen::VectorXd rv(static_cast<int>(act.size()));
    for (size_t r = 0; r < act.size(); ++r) rv(static_cast<int>(r)) = resid[r];
    const Eigen::MatrixXd jtj =
        jac.transpose() * jac +
        1e-12 * Eigen::MatrixXd::Identity(dim, dim) * std::max(1.0, ev.box_hi);
    const Eigen::VectorXd delta = jtj.ldlt().solve(jac.transpose() * rv);
    bool better = false;
    double scale = 1.0;
    for (int bt = 0; bt < 12; ++bt) {
      for (int i = 0; i < dim; ++i) trial[i] = z[i] - scale * delta(i);
      project_box(trial, ev.box_hi);
      const double ft = ev.penalty(ev.problem.formula, trial);
      if (ft < fz) {
        z = trial;
        fz = ft;
        better = true;
        break;
      }
      scale *= 0.5;
    }
    if (!better) break;
    if (fz == 0.0) break;
  }
  return ev.satisfied(ev.problem.formula, z);
}

bool formula_is_ground(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Leaf:
      return f.atom.poly.is_constant();
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (const Formula& ch : f.children)
        if (!formula_is_ground(ch)) return false;
      return true;
  }
  return true;
}

}  // namespace

bool verify_assignment(const FormulaProblem& problem, const std::vector<double>& values,
                       const Tolerances& tol) {
  Evaluator ev{problem, std::max(1.0, problem.entry_scale * 4.0), tol};
  return ev.satisfied(problem.formula, values);
}

DecideResult decide_exists(const FormulaProblem& problem, const DecideOptions& opts,
                           const Tolerances& tol) {
  const int dim = problem.vars.size();
  const double box_lo = std::max(1.0, opts.box_factor * problem.entry_scale);
  const double box_esc = 2.0 * box_lo;  // the box doubles once before giving up
  if (formula_is_ground(problem.formula)) {
    Evaluator ev{problem, box_lo, tol};
    if (ev.satisfied(problem.formula, std::vector<double>(dim, 0.0)))
      return {DecideResult::Kind::Sat, Assignment{}};
    return {DecideResult::Kind::Unsat, Assignment{}};
  }
  // Certified refutation over the escalated box (covers the tighter one).
  {
    Evaluator ev{problem, box_esc, tol};
    long budget = opts.refute_boxes;
    if (ev.refute_subdivide(problem.formula,
                            std::vector<Interval>(dim, Interval{0.0, box_esc}), budget))
      return {DecideResult::Kind::Unsat, Assignment{}};
  }
  // Multi-start penalty minimization; the first verified point wins.
  for (double box_hi : {box_lo, box_esc}) {
    Evaluator ev{problem, box_hi, tol};
    for (int s = 0; s < opts.restarts; ++s) {
      std::vector<double> z = halton_point(s, dim, box_hi);
      if (minimize_from(ev, z, opts.max_iterations))
        return {DecideResult::Kind::Sat, Assignment{std::move(z)}};
    }
  }
  return {DecideResult::Kind::Unknown, Assignment{}};
}

namespace {

// Substitutes an assignment into the matrix: collapsed variables fill both
// symmetric cells, split variables must agree (they satisfy the linking
// atoms up to slack; the forward value is used).
PartialMatrix substitute(const PartialMatrix& m, const FormulaProblem& problem,
                         const Assignment& a) {
  PartialMatrix out = m;
  for (int id = 0; id < problem.vars.size(); ++id) {
    const Indeterminate& v = problem.vars.var(id);
    if (problem.split_pairs && v.u > v.v) continue;  // backward copy
    const double value = a.values.empty() ? 0.0 : std::max(0.0, a.values[id]);
    out.set(v.u, v.v, value);
  }
  return out;
}

SolveOutcome yes_outcome(PartialMatrix completion, Realization real) {
  SolveOutcome out;
  out.answer = SolveOutcome::Answer::Yes;
  out.completion = std::move(completion);
  out.realization = std::move(real);
  return out;
}

}  // namespace

SolveOutcome solve_fillin(const PartialMatrix& m, int d, const SolveOptions& opts,
                          const Tolerances& tol) {
  const UnderlyingGraph g = UnderlyingGraph::of(m);
  const std::optional<FillIn> fill = min_fill_in(g, opts.kmax);
  if (!fill)
    throw PreconditionViolated("no fill-in of size at most " + std::to_string(opts.kmax));
  const FormulaProblem problem = build_fillin_formula(m, *fill, d, false, tol);
  const DecideResult res = decide_exists(problem, opts.decide, tol);
  SolveOutcome out;
  if (res.kind == DecideResult::Kind::Unsat) {
    out.answer = SolveOutcome::Answer::No;
    out.note = fill->edges.empty() ? "clique-wise infeasible" : "refuted over the variable box";
    return out;
  }
  if (res.kind == DecideResult::Kind::Unknown) {
    out.note = "backend exhausted its restarts";
    return out;
  }
  // Sat: the assignment yields a partial matrix with chordal support, which
  // the constructive completion finishes.
  const PartialMatrix extended = substitute(m, problem, res.assignment);
  ChordalCompletion comp = chordal_complete(extended, d, tol);
  if (!comp.yes) {
    out.note = "verified assignment failed the chordal completion";
    return out;  // Unknown: soundness is preserved by not answering yes
  }
  return yes_outcome(comp.completion, Realization{d, comp.points});
}

SolveOutcome solve_exact(const PartialMatrix& m, int d, const SolveOptions& opts,
                         const Tolerances& tol) {
  const int n = m.n();
  bool saw_unknown = false;
  std::vector<int> comb;
  for (int size = 1; size <= std::min(n, d + 1); ++size) {
    comb.assign(size, 0);
    for (int i = 0; i < size; ++i) comb[i] = i;
    while (true) {
      const FormulaProblem problem = build_basis_guess_formula(m, comb, d, false, tol);
      const DecideResult res = decide_exists(problem, opts.decide, tol);
      if (res.kind == DecideResult::Kind::Sat) {
        const PartialMatrix completion = substitute(m, problem, res.assignment);
        const RealizeResult rr = realize(completion, d, tol);
        if (realized(rr) && realization_residual(m, std::get<Realization>(rr).points) <=
                                tol.real_threshold(completion.max_abs_entry())) {
          return yes_outcome(completion, std::get<Realization>(rr));
        }
        saw_unknown = true;  // numerically accepted formula, rejected completion
      } else if (res.kind == DecideResult::Kind::Unknown) {
        saw_unknown = true;
      }
      int pos = size - 1;
      while (pos >= 0 && comb[pos] == n - size + pos) --pos;
      if (pos < 0) break;
      ++comb[pos];
      for (int i = pos + 1; i < size; ++i) comb[i] = comb[i - 1] + 1;
    }
  }
  SolveOutcome out;
  out.answer = saw_unknown ? SolveOutcome::Answer::Unknown : SolveOutcome::Answer::No;
  if (out.answer == SolveOutcome::Answer::No) out.note = "every basis guess refuted";
  return out;
}

}  // namespace edmc
