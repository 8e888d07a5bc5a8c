#include "edmc/chordal.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace edmc {

namespace {

// Maximum cardinality search; returns an elimination ordering (first element
// eliminated first). Ties broken by smallest vertex index.
std::vector<int> mcs_order(const UnderlyingGraph& g) {
  const int n = g.n();
  std::vector<int> weight(n, 0), selection;
  std::vector<char> numbered(n, 0);
  selection.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!numbered[v] && (best == -1 || weight[v] > weight[best])) best = v;
    numbered[best] = 1;
    selection.push_back(best);
    for (int u = 0; u < n; ++u)
      if (!numbered[u] && g.edge(best, u)) ++weight[u];
  }
  std::reverse(selection.begin(), selection.end());
  return selection;
}

// BFS shortest path from s to t among allowed vertices; empty if none.
std::vector<int> bfs_path(const UnderlyingGraph& g, int s, int t,
                          const std::vector<char>& allowed) {
  std::vector<int> prev(g.n(), -2);
  std::deque<int> q{s};
  prev[s] = -1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    if (v == t) break;
    for (int u = 0; u < g.n(); ++u)
      if (g.edge(v, u) && allowed[u] && prev[u] == -2) {
        prev[u] = v;
        q.push_back(u);
      }
  }
  if (prev[t] == -2) return {};
  std::vector<int> path;
  for (int v = t; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

// Any chordless cycle of length >= 4 of a non-chordal graph: scan apex
// vertices v with nonadjacent neighbors x,y and close a shortest x-y path
// avoiding N[v] minus the pair.
std::optional<ChordlessCycle> find_chordless_cycle(const UnderlyingGraph& g) {
  const int n = g.n();
  for (int v = 0; v < n; ++v) {
    const std::vector<int> nb = g.neighbors(v);
    for (size_t a = 0; a < nb.size(); ++a) {
      for (size_t b = a + 1; b < nb.size(); ++b) {
        const int x = nb[a], y = nb[b];
        if (g.edge(x, y)) continue;
        std::vector<char> allowed(n, 1);
        allowed[v] = 0;
        for (int u : nb)
          if (u != x && u != y) allowed[u] = 0;
        const std::vector<int> path = bfs_path(g, x, y, allowed);
        if (path.empty()) continue;
        ChordlessCycle c;
        c.vertices.push_back(v);
        c.vertices.insert(c.vertices.end(), path.begin(), path.end());
        return c;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

bool verify_elimination_ordering(const UnderlyingGraph& g, const std::vector<int>& order) {
  const int n = g.n();
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  for (int i = 0; i < n; ++i) {
    const int v = order[i];
    std::vector<int> later;
    for (int u = 0; u < n; ++u)
      if (g.edge(v, u) && pos[u] > i) later.push_back(u);
    if (!g.is_clique(later)) return false;
  }
  return true;
}

ChordalityResult is_chordal(const UnderlyingGraph& g) {
  std::vector<int> order = mcs_order(g);
  if (verify_elimination_ordering(g, order)) return EliminationOrdering{std::move(order)};
  const auto cyc = find_chordless_cycle(g);
  if (!cyc) throw Error("internal: MCS verification failed but no chordless cycle found");
  return *cyc;
}

std::vector<std::vector<int>> maximal_cliques_chordal(const UnderlyingGraph& g,
                                                      const EliminationOrdering& ordering) {
  if (!verify_elimination_ordering(g, ordering.order)) throw NotChordal();
  const int n = g.n();
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[ordering.order[i]] = i;
  std::vector<std::vector<int>> cand;
  for (int i = 0; i < n; ++i) {
    const int v = ordering.order[i];
    std::vector<int> c{v};
    for (int u = 0; u < n; ++u)
      if (g.edge(v, u) && pos[u] > i) c.push_back(u);
    std::sort(c.begin(), c.end());
    cand.push_back(std::move(c));
  }
  // Keep the inclusion-maximal candidates only.
  std::vector<std::vector<int>> out;
  for (size_t i = 0; i < cand.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < cand.size() && !dominated; ++j) {
      if (i == j || cand[j].size() <= cand[i].size()) continue;
      dominated = std::includes(cand[j].begin(), cand[j].end(), cand[i].begin(), cand[i].end());
    }
    if (!dominated) out.push_back(cand[i]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

bool fill_search(UnderlyingGraph g, int budget, long& nodes, long node_budget,
                 std::vector<std::pair<int, int>>& acc) {
  if (++nodes > node_budget) throw BudgetExceeded("min_fill_in node budget exceeded");
  const ChordalityResult res = is_chordal(g);
  if (std::holds_alternative<EliminationOrdering>(res)) return true;
  if (budget == 0) return false;
  const std::vector<int>& cyc = std::get<ChordlessCycle>(res).vertices;
  const int len = static_cast<int>(cyc.size());
  std::vector<std::pair<int, int>> chords;
  for (int a = 0; a < len; ++a)
    for (int b = a + 2; b < len; ++b) {
      if (a == 0 && b == len - 1) continue;  // cycle edge
      chords.emplace_back(std::min(cyc[a], cyc[b]), std::max(cyc[a], cyc[b]));
    }
  std::sort(chords.begin(), chords.end());
  for (const auto& [u, v] : chords) {
    g.add_edge(u, v);
    acc.emplace_back(u, v);
    if (fill_search(g, budget - 1, nodes, node_budget, acc)) return true;
    acc.pop_back();
    g.remove_edge(u, v);
  }
  return false;
}

}  // namespace

std::optional<FillIn> min_fill_in(const UnderlyingGraph& g, int kmax, const FillInOptions& opts) {
  long nodes = 0;
  for (int k = 0; k <= kmax; ++k) {
    std::vector<std::pair<int, int>> acc;
    if (fill_search(g, k, nodes, opts.node_budget, acc)) return FillIn{std::move(acc)};
  }
  return std::nullopt;
}

ChordalCheckResult chordal_edm_check(const PartialMatrix& m, int d, const Tolerances& tol) {
  const UnderlyingGraph g = UnderlyingGraph::of(m);
  const ChordalityResult ord = is_chordal(g);
  if (!std::holds_alternative<EliminationOrdering>(ord))
    throw NotChordal("chordal_edm_check requires a chordal underlying graph");
  const auto cliques = maximal_cliques_chordal(g, std::get<EliminationOrdering>(ord));
  for (const auto& c : cliques)
    if (!embeddable(m.submatrix(c), d, tol)) return {false, c};
  return {true, {}};
}

std::vector<int> clique_tree_parents(const UnderlyingGraph& g,
                                     const std::vector<std::vector<int>>& cliques) {
  (void)g;
  const int t = static_cast<int>(cliques.size());
  // Maximum-weight spanning forest over pairwise separator sizes (Kruskal,
  // deterministic tie order), rooted at the canonical first clique of each
  // tree. This satisfies the running intersection property.
  struct E {
    int w, a, b;
  };
  std::vector<E> es;
  for (int a = 0; a < t; ++a)
    for (int b = a + 1; b < t; ++b) {
      std::vector<int> inter;
      std::set_intersection(cliques[a].begin(), cliques[a].end(), cliques[b].begin(),
                            cliques[b].end(), std::back_inserter(inter));
      if (!inter.empty()) es.push_back({static_cast<int>(inter.size()), a, b});
    }
  std::sort(es.begin(), es.end(), [](const E& x, const E& y) {
    if (x.w != y.w) return x.w > y.w;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  std::vector<int> dsu(t);
  std::iota(dsu.begin(), dsu.end(), 0);
  auto find = [&](int x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  std::vector<std::vector<int>> adj(t);
  for (const E& e : es) {
    const int ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    dsu[ra] = rb;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<int> parent(t, -2);
  for (int root = 0; root < t; ++root) {
    if (parent[root] != -2) continue;
    parent[root] = -1;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      std::vector<int> kids = adj[c];
      std::sort(kids.begin(), kids.end(), std::greater<>());
      for (int k : kids)
        if (parent[k] == -2) {
          parent[k] = c;
          stack.push_back(k);
        }
    }
  }
  return parent;
}

namespace {

// Deterministic placement of one new point at prescribed squared distances
// from already placed points. The feasible set is a sphere slice orthogonal
// to the affine hull of the anchors; the free direction is chosen away from
// the centroid of everything placed so far, falling back to the first
// coordinate axis with a usable component.
Eigen::VectorXd place_point(const std::vector<Eigen::VectorXd>& anchors,
                            const std::vector<double>& sq_dist, int d,
                            const Eigen::VectorXd& centroid, double scale,
                            const Tolerances& tol) {
  const double glue_tol = tol.real_threshold(scale);
  if (anchors.empty()) return Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd& a0 = anchors[0];
  const int k = static_cast<int>(anchors.size()) - 1;
  Eigen::MatrixXd lhs(k, d);
  Eigen::VectorXd rhs(k);
  for (int i = 0; i < k; ++i) {
    lhs.row(i) = 2.0 * (anchors[i + 1] - a0).transpose();
    rhs(i) = anchors[i + 1].squaredNorm() - a0.squaredNorm() - (sq_dist[i + 1] - sq_dist[0]);
  }
  Eigen::VectorXd foot = a0;
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Identity(d, d);
  if (k > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lhs, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    const double rank_tol = std::max(smax, 1.0) * 1e-11;
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > rank_tol) ++rank;
    // Minimum-norm correction of the anchor onto the solution flat.
    const Eigen::VectorXd resid = rhs - lhs * a0;
    Eigen::VectorXd step = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < rank; ++i)
      step += (svd.matrixU().col(i).dot(resid) / svd.singularValues()(i)) * svd.matrixV().col(i);
    foot = a0 + step;
    if ((lhs * foot - rhs).cwiseAbs().maxCoeff() > glue_tol * 8)
      throw InternalGlueError("separator constraints are inconsistent");
    null_basis = svd.matrixV().rightCols(d - rank);
  }
  double h2 = sq_dist[0] - (foot - a0).squaredNorm();
  if (h2 < 0.0) {
    if (h2 < -glue_tol * 8) throw InternalGlueError("negative residual height while gluing");
    h2 = 0.0;
  }
  if (h2 == 0.0 || null_basis.cols() == 0) return foot;
  // Free direction within the null space.
  Eigen::VectorXd dir = null_basis * (null_basis.transpose() * (foot - centroid));
  if (dir.norm() <= 1e-9 * std::sqrt(std::max(1.0, scale))) {
    dir.setZero();
    for (int axis = 0; axis < d; ++axis) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      e(axis) = 1.0;
      Eigen::VectorXd proj = null_basis * (null_basis.transpose() * e);
      if (proj.norm() > 1e-9) {
        dir = proj(axis) >= 0 ? proj : Eigen::VectorXd(-proj);
        break;
      }
    }
  }
  if (dir.norm() == 0.0) throw InternalGlueError("no free direction available");
  return foot + std::sqrt(h2) * dir.normalized();
}

}  // namespace

ChordalCompletion chordal_complete(const PartialMatrix& m, int d, const Tolerances& tol) {
  ChordalCompletion out;
  const ChordalCheckResult check = chordal_edm_check(m, d, tol);
  if (!check.yes) {
    out.witness_clique = check.witness_clique;
    return out;
  }
  const int n = m.n();
  const double scale = m.max_abs_entry();
  const UnderlyingGraph g = UnderlyingGraph::of(m);
  std::vector<Eigen::VectorXd> points(n);
  std::vector<char> placed(n, 0);

  const auto components = g.connected_components();
  double offset = 0.0;
  for (const auto& comp : components) {
    // Clique tree of the component, walked root-first.
    const UnderlyingGraph sub = g.induced(comp);
    const ChordalityResult ord = is_chordal(sub);
    auto cliques = maximal_cliques_chordal(sub, std::get<EliminationOrdering>(ord));
    for (auto& c : cliques)
      for (int& v : c) v = comp[v];
    const std::vector<int> parent = clique_tree_parents(g, cliques);
    std::vector<int> walk;
    for (size_t i = 0; i < cliques.size(); ++i)
      if (parent[i] == -1) walk.push_back(static_cast<int>(i));
    for (size_t w = 0; w < walk.size(); ++w)
      for (size_t i = 0; i < cliques.size(); ++i)
        if (parent[i] == walk[w]) walk.push_back(static_cast<int>(i));

    std::vector<Eigen::VectorXd> comp_placed;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int ci : walk) {
      for (int v : cliques[ci]) {
        if (placed[v]) continue;
        std::vector<Eigen::VectorXd> anchors;
        std::vector<double> sq;
        for (int u : cliques[ci])
          if (placed[u]) {
            anchors.push_back(points[u]);
            sq.push_back(m.at(u, v));
          }
        points[v] = place_point(anchors, sq, d, centroid, scale, tol);
        placed[v] = 1;
        comp_placed.push_back(points[v]);
        centroid = Eigen::VectorXd::Zero(d);
        for (const auto& p : comp_placed) centroid += p;
        centroid /= static_cast<double>(comp_placed.size());
      }
    }
    // Juxtapose components along the first axis, separated by diameters.
    if (d > 0 && !comp_placed.empty()) {
      double lo = comp_placed[0](0), hi = comp_placed[0](0);
      for (const auto& p : comp_placed) {
        lo = std::min(lo, p(0));
        hi = std::max(hi, p(0));
      }
      double diam = 0.0;
      for (size_t a = 0; a < comp_placed.size(); ++a)
        for (size_t b = a + 1; b < comp_placed.size(); ++b)
          diam = std::max(diam, (comp_placed[a] - comp_placed[b]).norm());
      for (int v : comp) points[v](0) += offset - lo;
      offset += (hi - lo) + diam + 1.0;
    }
  }

  out.yes = true;
  out.points = Eigen::MatrixXd(n, d);
  for (int v = 0; v < n; ++v) out.points.row(v) = points[v].transpose();
  // Specified entries are copied verbatim; the rest come from the points.
  out.completion = PartialMatrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (m.specified(i, j))
        out.completion.set(i, j, m.at(i, j));
      else
        out.completion.set(i, j, (points[i] - points[j]).squaredNorm());
    }
  const double resid = realization_residual(m, out.points);
  if (resid > tol.real_threshold(scale))
    throw InternalGlueError("completion residual " + std::to_string(resid) +
                            " exceeds tolerance");
  return out;
}

}  // namespace edmc
