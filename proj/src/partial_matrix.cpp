#include "edmc/partial_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace edmc {

PartialMatrix::PartialMatrix(int n)
    : n_(n), val_(static_cast<size_t>(n) * n, 0.0), spec_(static_cast<size_t>(n) * n, 0) {
  for (int i = 0; i < n; ++i) spec_[idx(i, i)] = 1;
}

PartialMatrix PartialMatrix::complete_from(int n, const std::vector<double>& values) {
  PartialMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set(i, j, values[static_cast<size_t>(i) * n + j]);
  return m;
}

void PartialMatrix::set(int i, int j, double v) {
  if (i == j) {
    if (v != 0.0) throw Error("diagonal entries must be zero");
    return;
  }
  if (v < 0.0) throw Error("specified entries must be nonnegative");
  val_[idx(i, j)] = val_[idx(j, i)] = v;
  spec_[idx(i, j)] = spec_[idx(j, i)] = 1;
}

void PartialMatrix::unset(int i, int j) {
  if (i == j) throw Error("diagonal entries cannot be unspecified");
  val_[idx(i, j)] = val_[idx(j, i)] = 0.0;
  spec_[idx(i, j)] = spec_[idx(j, i)] = 0;
}

bool PartialMatrix::is_complete() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!specified(i, j)) return false;
  return true;
}

int PartialMatrix::unspecified_pair_count() const {
  int c = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!specified(i, j)) ++c;
  return c;
}

int PartialMatrix::row_unspecified(int i) const {
  int c = 0;
  for (int j = 0; j < n_; ++j)
    if (j != i && !specified(i, j)) ++c;
  return c;
}

double PartialMatrix::max_abs_entry() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (specified(i, j)) s = std::max(s, std::abs(val_[idx(i, j)]));
  return s;
}

PartialMatrix PartialMatrix::submatrix(const std::vector<int>& indices) const {
  PartialMatrix m(static_cast<int>(indices.size()));
  for (size_t a = 0; a < indices.size(); ++a)
    for (size_t b = a + 1; b < indices.size(); ++b)
      if (specified(indices[a], indices[b]))
        m.set(static_cast<int>(a), static_cast<int>(b), at(indices[a], indices[b]));
  return m;
}

PartialMatrix PartialMatrix::remove_index(int r) const {
  std::vector<int> keep;
  keep.reserve(n_ - 1);
  for (int i = 0; i < n_; ++i)
    if (i != r) keep.push_back(i);
  return submatrix(keep);
}

UnderlyingGraph UnderlyingGraph::of(const PartialMatrix& m) {
  UnderlyingGraph g(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j)
      if (m.specified(i, j)) g.add_edge(i, j);
  return g;
}

std::vector<int> UnderlyingGraph::neighbors(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n_; ++u)
    if (edge(v, u)) out.push_back(u);
  return out;
}

int UnderlyingGraph::degree(int v) const {
  int d = 0;
  for (int u = 0; u < n_; ++u)
    if (edge(v, u)) ++d;
  return d;
}

bool UnderlyingGraph::is_clique(const std::vector<int>& vs) const {
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b)
      if (!edge(vs[a], vs[b])) return false;
  return true;
}

bool UnderlyingGraph::is_complete() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!edge(i, j)) return false;
  return true;
}

UnderlyingGraph UnderlyingGraph::complement() const {
  UnderlyingGraph g(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!edge(i, j)) g.add_edge(i, j);
  return g;
}

UnderlyingGraph UnderlyingGraph::induced(const std::vector<int>& vs) const {
  UnderlyingGraph g(static_cast<int>(vs.size()));
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b)
      if (edge(vs[a], vs[b])) g.add_edge(static_cast<int>(a), static_cast<int>(b));
  return g;
}

UnderlyingGraph UnderlyingGraph::remove_vertex(int v) const {
  std::vector<int> keep;
  for (int i = 0; i < n_; ++i)
    if (i != v) keep.push_back(i);
  return induced(keep);
}

std::vector<std::vector<int>> UnderlyingGraph::connected_components() const {
  std::vector<std::vector<int>> comps;
  std::vector<char> seen(n_, 0);
  for (int s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int u = 0; u < n_; ++u)
        if (edge(v, u) && !seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

namespace {

void bron_kerbosch(const UnderlyingGraph& g, std::vector<int>& r, std::vector<int> p,
                   std::vector<int> x, std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  // Pivot: vertex of P union X with most neighbors in P.
  int pivot = -1, best = -1;
  for (const auto* s : {&p, &x})
    for (int v : *s) {
      int c = 0;
      for (int u : p)
        if (g.edge(v, u)) ++c;
      if (c > best) {
        best = c;
        pivot = v;
      }
    }
  std::vector<int> cands;
  for (int v : p)
    if (!g.edge(pivot, v)) cands.push_back(v);
  for (int v : cands) {
    std::vector<int> np, nx;
    for (int u : p)
      if (g.edge(v, u)) np.push_back(u);
    for (int u : x)
      if (g.edge(v, u)) nx.push_back(u);
    r.push_back(v);
    bron_kerbosch(g, r, np, nx, out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

}  // namespace

std::vector<std::vector<int>> UnderlyingGraph::maximal_cliques() const {
  std::vector<std::vector<int>> out;
  std::vector<int> r, p(n_);
  for (int i = 0; i < n_; ++i) p[i] = i;
  bron_kerbosch(*this, r, p, {}, out);
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, int>> UnderlyingGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (edge(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<int, int>> UnderlyingGraph::non_edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!edge(i, j)) out.emplace_back(i, j);
  return out;
}

const Tolerances& Tolerances::defaults() {
  static const Tolerances t;
  return t;
}

double Tolerances::eig_threshold(double scale) const { return eig * std::max(1.0, scale); }

double Tolerances::cm_threshold(double scale, int npoints) const {
  return cm * std::pow(std::max(1.0, scale), std::max(0, npoints - 1));
}

double Tolerances::real_threshold(double scale) const { return real * std::max(1.0, scale); }

}  // namespace edmc
