#include "edmc/compress.hpp"

#include <algorithm>
#include <limits>

namespace edmc {

namespace {

constexpr long long kSaturated = std::numeric_limits<long long>::max();

long long sat_mul(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

long long binom_sat(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) {
    r = sat_mul(r, n - k + i);
    if (r == kSaturated) return kSaturated;
    r /= i;
  }
  return r;
}

}  // namespace

long long eta_ktt(int d, int t) {
  long long pw = 1;
  for (int i = 0; i < t + 1; ++i) pw = sat_mul(pw, d + 1);
  const long long a = sat_mul(d + 1, t);
  const long long b = sat_mul(t - 1, pw);
  if (a == kSaturated || b == kSaturated) return kSaturated;
  return a + b + 1;
}

long long rho_ktt(int d, int t) {
  const long long eta = eta_ktt(d, t);
  if (eta == kSaturated) return kSaturated;
  return binom_sat(2LL * t + eta - 2, 2LL * t - 1);
}

namespace {

bool block_search(const PartialMatrix& m, int t, const std::vector<int>& candidates,
                  std::vector<int>& rows, int start, long& nodes, long budget,
                  BlockPatternWitness& out) {
  if (++nodes > budget) throw BudgetExceeded("detect_block_pattern node budget exceeded");
  if (static_cast<int>(rows.size()) == t) {
    // Columns: vertices outside `rows` unspecified against every row.
    std::vector<int> cols;
    for (int c = 0; c < m.n(); ++c) {
      if (std::find(rows.begin(), rows.end(), c) != rows.end()) continue;
      bool ok = true;
      for (int r : rows)
        if (m.specified(r, c)) {
          ok = false;
          break;
        }
      if (ok) {
        cols.push_back(c);
        if (static_cast<int>(cols.size()) == t) {
          out.rows = rows;
          out.cols = cols;
          return true;
        }
      }
    }
    return false;
  }
  for (size_t i = start; i < candidates.size(); ++i) {
    rows.push_back(candidates[i]);
    if (block_search(m, t, candidates, rows, static_cast<int>(i) + 1, nodes, budget, out))
      return true;
    rows.pop_back();
  }
  return false;
}

}  // namespace

std::optional<BlockPatternWitness> detect_block_pattern(const PartialMatrix& m, int t,
                                                        const SearchOptions& opts) {
  if (t < 1) throw PreconditionViolated("t must be >= 1");
  // Only vertices with at least t unspecified partners can participate.
  std::vector<int> candidates;
  for (int v = 0; v < m.n(); ++v)
    if (m.row_unspecified(v) >= t) candidates.push_back(v);
  if (static_cast<int>(candidates.size()) < t) return std::nullopt;
  std::vector<int> rows;
  BlockPatternWitness w;
  long nodes = 0;
  if (block_search(m, t, candidates, rows, 0, nodes, opts.node_budget, w)) return w;
  return std::nullopt;
}

namespace {

struct RamseyResult {
  bool is_clique;
  std::vector<int> vertices;
};

// Either a clique of size a or an independent set of size b of gbar[verts].
// Classic recursion: pick the smallest vertex; its neighborhood carries the
// clique budget, its non-neighborhood the independent-set budget.
RamseyResult ramsey_find(const UnderlyingGraph& gbar, const std::vector<int>& verts, int a,
                         int b) {
  if (a == 0) return {true, {}};
  if (b == 0) return {false, {}};
  if (verts.empty()) {
    // Exhausted: report the larger admissible empty answer as a failure by
    // returning an undersized set; callers check sizes.
    return {false, {}};
  }
  const int v = verts.front();
  std::vector<int> nb, nnb;
  for (size_t i = 1; i < verts.size(); ++i) {
    (gbar.edge(v, verts[i]) ? nb : nnb).push_back(verts[i]);
  }
  const long long need_nb = binom_sat(a + b - 3, a - 2);
  const bool go_clique_side = static_cast<long long>(nb.size()) >= need_nb;
  if (go_clique_side) {
    RamseyResult r = ramsey_find(gbar, nb, a - 1, b);
    if (r.is_clique) {
      r.vertices.insert(r.vertices.begin(), v);
      return r;
    }
    if (static_cast<int>(r.vertices.size()) >= b) return r;
  }
  RamseyResult r = ramsey_find(gbar, nnb, a, b - 1);
  if (!r.is_clique) {
    r.vertices.insert(r.vertices.begin(), v);
    if (static_cast<int>(r.vertices.size()) >= b) return r;
    // Undersized independent set; fall through to the other branch once.
    if (!go_clique_side) {
      RamseyResult rc = ramsey_find(gbar, nb, a - 1, b);
      if (rc.is_clique) {
        rc.vertices.insert(rc.vertices.begin(), v);
        return rc;
      }
      if (static_cast<int>(rc.vertices.size()) >= b) return rc;
    }
    return r;
  }
  return r;
}

}  // namespace

std::vector<int> ramsey_independent_set(const UnderlyingGraph& gbar, int no_clique,
                                        int target) {
  std::vector<int> verts(gbar.n());
  for (int i = 0; i < gbar.n(); ++i) verts[i] = i;
  RamseyResult r = ramsey_find(gbar, verts, no_clique, target);
  if (r.is_clique)
    throw TargetUnreachable("found a clique of size " + std::to_string(r.vertices.size()) +
                            " in the complement; the block-pattern hypothesis is violated");
  if (static_cast<int>(r.vertices.size()) < target)
    throw TargetUnreachable("recursion exhausted vertices before reaching an independent set of size " +
                            std::to_string(target));
  r.vertices.resize(target);
  return r.vertices;
}

std::optional<int> find_irrelevant_in_clique(const PartialMatrix& m,
                                             const std::vector<int>& clique, int d,
                                             const IrrelevantSchedule& schedule,
                                             const Tolerances& tol) {
  std::vector<char> protected_idx(m.n(), 0);
  // Peeled bases: X_i is a metric basis of M[X minus earlier bases].
  std::vector<int> remaining = clique;
  std::sort(remaining.begin(), remaining.end());
  for (int round = 0; round < schedule.peel_rounds; ++round) {
    if (remaining.empty()) break;
    const MetricBasis b = metric_basis(m.submatrix(remaining), tol);
    std::vector<int> original;
    for (int local : b.indices) original.push_back(remaining[local]);
    for (int v : original) {
      protected_idx[v] = 1;
      remaining.erase(std::find(remaining.begin(), remaining.end(), v));
    }
  }
  for (const auto& section : schedule.sections) {
    if (section.empty()) continue;
    std::vector<int> sec = section;
    std::sort(sec.begin(), sec.end());
    const MetricBasis b = metric_basis(m.submatrix(sec), tol);
    for (int local : b.indices) protected_idx[sec[local]] = 1;
  }
  std::vector<int> sorted = clique;
  std::sort(sorted.begin(), sorted.end());
  for (int v : sorted)
    if (!protected_idx[v]) return v;
  return std::nullopt;
}

namespace {

// Decide a fully specified instance outright.
CompressOutcome solve_complete(const PartialMatrix& m, int d, const std::vector<int>& alive,
                               const std::vector<int>& removed, const Tolerances& tol) {
  CompressOutcome out;
  out.kind = CompressOutcome::Kind::Solved;
  out.removed = removed;
  RealizeResult r = realize(m, d, tol);
  if (realized(r)) {
    out.answer_yes = true;
    out.realization = std::get<Realization>(r);
  } else {
    out.answer_yes = false;
    out.witness_clique = alive;
  }
  return out;
}

CompressOutcome reduced_outcome(const PartialMatrix& m, std::vector<int> alive,
                                std::vector<int> removed) {
  CompressOutcome out;
  out.kind = CompressOutcome::Kind::Reduced;
  out.reduced = m;
  out.kept = std::move(alive);
  out.removed = std::move(removed);
  return out;
}

CompressOutcome solved_no(std::vector<int> witness, std::vector<int> removed) {
  CompressOutcome out;
  out.kind = CompressOutcome::Kind::Solved;
  out.answer_yes = false;
  out.witness_clique = std::move(witness);
  out.removed = std::move(removed);
  return out;
}

std::vector<int> to_original(const std::vector<int>& local, const std::vector<int>& alive) {
  std::vector<int> out;
  out.reserve(local.size());
  for (int v : local) out.push_back(alive[v]);
  return out;
}

}  // namespace

CompressOutcome compress_ktt(const PartialMatrix& input, int d, int t, bool verify,
                             const Tolerances& tol) {
  if (t < 1) throw PreconditionViolated("t must be >= 1");
  if (verify) {
    if (auto w = detect_block_pattern(input, t))
      throw PreconditionViolated("matrix contains a " + std::to_string(t) + "-block pattern");
  }
  PartialMatrix m = input;
  std::vector<int> alive(input.n());
  for (int i = 0; i < input.n(); ++i) alive[i] = i;
  std::vector<int> removed;
  const long long rho = rho_ktt(d, t);
  const long long eta = eta_ktt(d, t);

  for (int round = 0; round <= input.n(); ++round) {
    if (m.is_complete()) return solve_complete(m, d, alive, removed, tol);
    if (static_cast<long long>(m.n()) < rho) return reduced_outcome(m, alive, removed);

    const UnderlyingGraph g = UnderlyingGraph::of(m);
    const std::vector<int> x =
        ramsey_independent_set(g.complement(), 2 * t, static_cast<int>(eta));
    if (!embeddable(m.submatrix(x), d, tol))
      return solved_no(to_original(x, alive), removed);
    // Clique of every outside vertex with its X-neighborhood.
    std::vector<char> in_x(m.n(), 0);
    for (int v : x) in_x[v] = 1;
    std::vector<std::vector<int>> x_neigh(m.n());
    for (int v = 0; v < m.n(); ++v) {
      if (in_x[v]) continue;
      std::vector<int> cv{v};
      for (int u : x)
        if (g.edge(v, u)) cv.push_back(u);
      std::sort(cv.begin(), cv.end());
      if (!embeddable(m.submatrix(cv), d, tol))
        return solved_no(to_original(cv, alive), removed);
      x_neigh[v] = cv;
    }
    // Peel t bases from X; outside vertices with a non-neighbor in every
    // peeled basis contribute their own protected basis.
    IrrelevantSchedule schedule;
    schedule.peel_rounds = t;
    std::vector<std::vector<int>> peeled;
    {
      std::vector<int> remaining = x;
      std::sort(remaining.begin(), remaining.end());
      for (int i = 0; i < t && !remaining.empty(); ++i) {
        const MetricBasis b = metric_basis(m.submatrix(remaining), tol);
        std::vector<int> orig;
        for (int local : b.indices) orig.push_back(remaining[local]);
        peeled.push_back(orig);
        for (int v : orig) remaining.erase(std::find(remaining.begin(), remaining.end(), v));
      }
    }
    for (int y = 0; y < m.n(); ++y) {
      if (in_x[y]) continue;
      bool in_y_set = true;
      for (const auto& xi : peeled) {
        bool has_non_neighbor = false;
        for (int u : xi)
          if (!g.edge(y, u)) {
            has_non_neighbor = true;
            break;
          }
        if (!has_non_neighbor) {
          in_y_set = false;
          break;
        }
      }
      if (!in_y_set) continue;
      std::vector<int> ky;
      for (int u : x)
        if (g.edge(y, u)) ky.push_back(u);
      if (!ky.empty()) schedule.sections.push_back(ky);
    }
    const std::optional<int> w = find_irrelevant_in_clique(m, x, d, schedule, tol);
    if (!w) throw Error("internal: no irrelevant vertex in a large enough clique");
    removed.push_back(alive[*w]);
    alive.erase(alive.begin() + *w);
    m = m.remove_index(*w);
  }
  throw Error("internal: compression failed to terminate");
}

CompressOutcome compress_maxdeg(const PartialMatrix& input, int d, int max_unspecified,
                                const Tolerances& tol) {
  for (int i = 0; i < input.n(); ++i)
    if (input.row_unspecified(i) > max_unspecified)
      throw PreconditionViolated("row " + std::to_string(i + 1) + " has " +
                                 std::to_string(input.row_unspecified(i)) +
                                 " unspecified entries, above the stated bound of " +
                                 std::to_string(max_unspecified));
  PartialMatrix m = input;
  std::vector<int> alive(input.n());
  for (int i = 0; i < input.n(); ++i) alive[i] = i;
  std::vector<int> removed;
  const long long bound = static_cast<long long>(d + 1) * (max_unspecified + 1) *
                          (max_unspecified + 1);
  const int x_size = (d + 1) * (max_unspecified + 1) + 1;

  for (int round = 0; round <= input.n(); ++round) {
    if (m.is_complete()) return solve_complete(m, d, alive, removed, tol);
    if (static_cast<long long>(m.n()) <= bound) return reduced_outcome(m, alive, removed);

    const UnderlyingGraph g = UnderlyingGraph::of(m);
    // Greedy independent set in the complement = greedy clique of G.
    std::vector<int> x;
    for (int v = 0; v < m.n() && static_cast<int>(x.size()) < x_size; ++v) {
      bool ok = true;
      for (int u : x)
        if (!g.edge(v, u)) {
          ok = false;
          break;
        }
      if (ok) x.push_back(v);
    }
    if (static_cast<int>(x.size()) < x_size)
      throw Error("internal: greedy clique too small despite the degree bound");
    if (!embeddable(m.submatrix(x), d, tol))
      return solved_no(to_original(x, alive), removed);
    std::vector<char> in_x(m.n(), 0);
    for (int v : x) in_x[v] = 1;
    for (int v = 0; v < m.n(); ++v) {
      if (in_x[v]) continue;
      std::vector<int> cv{v};
      for (int u : x)
        if (g.edge(v, u)) cv.push_back(u);
      std::sort(cv.begin(), cv.end());
      if (!embeddable(m.submatrix(cv), d, tol))
        return solved_no(to_original(cv, alive), removed);
    }
    IrrelevantSchedule schedule;
    schedule.peel_rounds = max_unspecified + 1;
    const std::optional<int> w = find_irrelevant_in_clique(m, x, d, schedule, tol);
    if (!w) throw Error("internal: no irrelevant vertex in the greedy clique");
    removed.push_back(alive[*w]);
    alive.erase(alive.begin() + *w);
    m = m.remove_index(*w);
  }
  throw Error("internal: compression failed to terminate");
}

namespace {

void validate_cover(const PartialMatrix& m, const CliqueCover& cover) {
  const int n = m.n();
  for (const auto& c : cover.cliques) {
    for (int v : c)
      if (v < 0 || v >= n) throw InvalidCover("clique index out of range");
    for (size_t a = 0; a < c.size(); ++a)
      for (size_t b = a + 1; b < c.size(); ++b) {
        if (c[a] == c[b]) throw InvalidCover("duplicate index inside a clique");
        if (!m.specified(c[a], c[b]))
          throw InvalidCover("clique spans the unspecified pair (" +
                             std::to_string(c[a] + 1) + "," + std::to_string(c[b] + 1) + ")");
      }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!m.specified(i, j)) continue;
      bool covered = false;
      for (const auto& c : cover.cliques) {
        const bool hi = std::find(c.begin(), c.end(), i) != c.end();
        const bool hj = std::find(c.begin(), c.end(), j) != c.end();
        if (hi && hj) {
          covered = true;
          break;
        }
      }
      if (!covered)
        throw InvalidCover("specified pair (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ") is covered by no clique");
    }
}

}  // namespace

CompressOutcome compress_cliquecover(const PartialMatrix& input, int d,
                                     const CliqueCover& cover, const Tolerances& tol) {
  validate_cover(input, cover);
  const int k = static_cast<int>(cover.cliques.size());
  PartialMatrix m = input;
  std::vector<int> alive(input.n());
  for (int i = 0; i < input.n(); ++i) alive[i] = i;
  std::vector<int> removed;
  std::vector<std::vector<int>> cliques = cover.cliques;  // local indices
  for (auto& c : cliques) std::sort(c.begin(), c.end());
  const long long bound = static_cast<long long>(d + 1) * k * k;

  auto drop_vertex = [&](int local) {
    removed.push_back(alive[local]);
    alive.erase(alive.begin() + local);
    m = m.remove_index(local);
    for (auto& c : cliques) {
      c.erase(std::remove(c.begin(), c.end(), local), c.end());
      for (int& v : c)
        if (v > local) --v;
    }
  };

  for (int round = 0; round <= 2 * input.n(); ++round) {
    // Clique-wise embeddability; re-checked each round (deletions only ever
    // shrink the cliques, so this stays true once established).
    for (const auto& c : cliques)
      if (!embeddable(m.submatrix(c), d, tol))
        return solved_no(to_original(c, alive), removed);
    // Isolated vertices are trivially irrelevant.
    {
      const UnderlyingGraph g = UnderlyingGraph::of(m);
      int iso = -1;
      for (int v = 0; v < m.n(); ++v)
        if (g.degree(v) == 0) {
          iso = v;
          break;
        }
      if (iso >= 0) {
        drop_vertex(iso);
        continue;
      }
    }
    if (m.is_complete()) return solve_complete(m, d, alive, removed, tol);
    if (static_cast<long long>(m.n()) <= bound) return reduced_outcome(m, alive, removed);

    // Some clique must exceed (d+1)k; peel one basis per cover clique from
    // its intersections and delete a member of none of them.
    int big = -1;
    for (int i = 0; i < k; ++i)
      if (static_cast<long long>(cliques[i].size()) > static_cast<long long>(d + 1) * k) {
        big = i;
        break;
      }
    if (big < 0) throw Error("internal: no oversized clique despite the size bound");
    IrrelevantSchedule schedule;
    for (int j = 0; j < k; ++j) {
      std::vector<int> inter;
      std::set_intersection(cliques[big].begin(), cliques[big].end(), cliques[j].begin(),
                            cliques[j].end(), std::back_inserter(inter));
      if (!inter.empty()) schedule.sections.push_back(inter);
    }
    const std::optional<int> w = find_irrelevant_in_clique(m, cliques[big], d, schedule, tol);
    if (!w) throw Error("internal: no irrelevant vertex in the oversized clique");
    drop_vertex(*w);
  }
  throw Error("internal: compression failed to terminate");
}

namespace {

bool cover_search(const UnderlyingGraph& g, const std::vector<std::pair<int, int>>& edges,
                  const std::vector<std::vector<int>>& maximal, int kmax,
                  std::vector<int>& chosen, long& nodes, long budget) {
  if (++nodes > budget) throw BudgetExceeded("edge_clique_cover_search node budget exceeded");
  int uncovered = -1;
  for (size_t e = 0; e < edges.size(); ++e) {
    bool cov = false;
    for (int ci : chosen) {
      const auto& c = maximal[ci];
      if (std::binary_search(c.begin(), c.end(), edges[e].first) &&
          std::binary_search(c.begin(), c.end(), edges[e].second)) {
        cov = true;
        break;
      }
    }
    if (!cov) {
      uncovered = static_cast<int>(e);
      break;
    }
  }
  if (uncovered < 0) return true;
  if (static_cast<int>(chosen.size()) == kmax) return false;
  const auto [u, v] = edges[uncovered];
  for (size_t ci = 0; ci < maximal.size(); ++ci) {
    const auto& c = maximal[ci];
    if (!std::binary_search(c.begin(), c.end(), u) ||
        !std::binary_search(c.begin(), c.end(), v))
      continue;
    chosen.push_back(static_cast<int>(ci));
    if (cover_search(g, edges, maximal, kmax, chosen, nodes, budget)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

std::optional<CliqueCover> edge_clique_cover_search(const UnderlyingGraph& g, int kmax,
                                                    const SearchOptions& opts) {
  if (kmax > 6) throw PreconditionViolated("edge_clique_cover_search is capped at kmax = 6");
  const auto edges = g.edges();
  if (edges.empty()) return CliqueCover{};
  // A minimum cover can always be assembled from maximal cliques.
  const auto maximal = g.maximal_cliques();
  long nodes = 0;
  for (int k = 1; k <= kmax; ++k) {
    std::vector<int> chosen;
    if (cover_search(g, edges, maximal, k, chosen, nodes, opts.node_budget)) {
      CliqueCover out;
      for (int ci : chosen) out.cliques.push_back(maximal[ci]);
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace edmc
