#include "edmc/instances.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "edmc/chordal.hpp"

namespace edmc {

namespace {

// Shortest decimal that round-trips the double.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_spaces();
      if (!eof() && peek() == '\n')
        advance();
      else
        break;
    }
  }
  std::string next_token() {
    skip_spaces();
    if (eof() || peek() == '\n') return {};
    std::string tok;
    while (!eof() && peek() != ' ' && peek() != '\t' && peek() != '\r' && peek() != '\n') {
      tok += peek();
      advance();
    }
    return tok;
  }
  void expect_newline_or_eof() {
    skip_spaces();
    if (eof()) return;
    if (peek() != '\n') throw ParseError(line, col, "trailing characters on line");
    advance();
  }
};

double parse_number(const std::string& tok, int line, int col) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(line, col, "expected a number, got '" + tok + "'");
  return v;
}

long parse_int(const std::string& tok, int line, int col) {
  long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(line, col, "expected an integer, got '" + tok + "'");
  return v;
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  Cursor c{text};
  c.skip_blank_lines();
  int hl = c.line, hc = c.col;
  const std::string ntok = c.next_token();
  if (ntok.empty()) throw ParseError(hl, hc, "missing header");
  const long n = parse_int(ntok, hl, hc);
  hl = c.line;
  hc = c.col;
  const std::string dtok = c.next_token();
  if (dtok.empty()) throw ParseError(hl, hc, "missing dimension in header");
  const long d = parse_int(dtok, hl, hc);
  if (n < 1) throw ParseError(hl, hc, "order must be positive");
  if (d < 0) throw ParseError(hl, hc, "dimension must be nonnegative");
  c.expect_newline_or_eof();

  InstanceFile inst;
  inst.d = static_cast<int>(d);
  inst.matrix = PartialMatrix(static_cast<int>(n));
  // Raw grid to check symmetry of both values and specified-ness.
  std::vector<std::vector<std::optional<double>>> grid(
      n, std::vector<std::optional<double>>(n));
  std::vector<std::vector<std::pair<int, int>>> where(
      n, std::vector<std::pair<int, int>>(n, {0, 0}));
  for (long i = 0; i < n; ++i) {
    c.skip_blank_lines();
    for (long j = 0; j < n; ++j) {
      const int tl = c.line, tc = c.col;
      const std::string tok = c.next_token();
      if (tok.empty())
        throw ParseError(c.line, c.col,
                         "row " + std::to_string(i + 1) + " has too few fields");
      where[i][j] = {tl, tc};
      if (tok == "*") continue;
      const double v = parse_number(tok, tl, tc);
      if (i == j && v != 0.0) throw NonzeroDiagonalError(tl, tc, "diagonal must be zero");
      if (v < 0.0)
        throw NegativeEntryError(tl, tc, "entry (" + std::to_string(i + 1) + "," +
                                             std::to_string(j + 1) + ")");
      grid[i][j] = v;
    }
    c.expect_newline_or_eof();
  }
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      if (i == j) {
        if (!grid[i][j].has_value())
          throw NonzeroDiagonalError(where[i][j].first, where[i][j].second,
                                     "diagonal must be specified as zero");
        continue;
      }
      if (grid[i][j].has_value() != grid[j][i].has_value())
        throw AsymmetryError(where[i][j].first, where[i][j].second,
                             "presence of (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") differs from its mirror");
      if (grid[i][j] && *grid[i][j] != *grid[j][i])
        throw AsymmetryError(where[i][j].first, where[i][j].second,
                             "value of (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") differs from its mirror");
      if (grid[i][j] && i < j)
        inst.matrix.set(static_cast<int>(i), static_cast<int>(j), *grid[i][j]);
    }

  // Optional metadata block.
  c.skip_blank_lines();
  if (!c.eof()) {
    const int ml = c.line, mc = c.col;
    const std::string marker = c.next_token();
    if (marker != "#meta")
      throw ParseError(ml, mc, "unexpected content after the matrix (expected #meta)");
    c.expect_newline_or_eof();
    std::vector<std::pair<int, std::vector<double>>> pts;
    while (true) {
      c.skip_blank_lines();
      if (c.eof()) break;
      const int kl = c.line, kc = c.col;
      const std::string key = c.next_token();
      if (key == "point") {
        const std::string itok = c.next_token();
        const long idx = parse_int(itok, c.line, c.col);
        if (idx < 1 || idx > n) throw ParseError(kl, kc, "point index out of range");
        std::vector<double> coords;
        while (true) {
          const std::string t = c.next_token();
          if (t.empty()) break;
          coords.push_back(parse_number(t, c.line, c.col));
        }
        pts.emplace_back(static_cast<int>(idx - 1), coords);
      } else if (key == "generator") {
        std::string rest, t;
        while (!(t = c.next_token()).empty()) rest += (rest.empty() ? "" : " ") + t;
        inst.generator = rest;
      } else if (key == "seed") {
        inst.seed = static_cast<std::uint64_t>(parse_int(c.next_token(), c.line, c.col));
      } else if (key == "clique") {
        std::vector<int> clique;
        std::string t;
        while (!(t = c.next_token()).empty()) {
          const long v = parse_int(t, c.line, c.col);
          if (v < 1 || v > n) throw ParseError(kl, kc, "clique index out of range");
          clique.push_back(static_cast<int>(v - 1));
        }
        inst.cliques.push_back(std::move(clique));
      } else {
        throw ParseError(kl, kc, "unknown metadata key '" + key + "'");
      }
      c.expect_newline_or_eof();
    }
    if (!pts.empty()) {
      const size_t dim = pts[0].second.size();
      Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, static_cast<int>(dim));
      for (const auto& [idx, coords] : pts) {
        if (coords.size() != dim) throw ParseError(1, 1, "inconsistent point dimensions");
        for (size_t k = 0; k < dim; ++k) p(idx, static_cast<int>(k)) = coords[k];
      }
      // Ground truth must reproduce the specified entries.
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (inst.matrix.specified(i, j)) {
            const double got = (p.row(i) - p.row(j)).squaredNorm();
            const double want = inst.matrix.at(i, j);
            if (std::abs(got - want) > 1e-12 * std::max(1.0, std::abs(want)))
              throw ParseError(1, 1, "metadata points do not reproduce entry (" +
                                         std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ")");
          }
      inst.points = p;
    }
  }
  return inst;
}

std::string serialize_instance(const InstanceFile& inst) {
  std::ostringstream out;
  const int n = inst.matrix.n();
  out << n << ' ' << inst.d << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ' ';
      if (i == j)
        out << '0';
      else if (inst.matrix.specified(i, j))
        out << format_double(inst.matrix.at(i, j));
      else
        out << '*';
    }
    out << '\n';
  }
  const bool has_meta = inst.points.has_value() || !inst.generator.empty() ||
                        inst.seed.has_value() || !inst.cliques.empty();
  if (has_meta) {
    out << "#meta\n";
    if (!inst.generator.empty()) out << "generator " << inst.generator << '\n';
    if (inst.seed) out << "seed " << *inst.seed << '\n';
    for (const auto& c : inst.cliques) {
      out << "clique";
      for (int v : c) out << ' ' << (v + 1);
      out << '\n';
    }
    if (inst.points) {
      for (int i = 0; i < n; ++i) {
        out << "point " << (i + 1);
        for (int k = 0; k < inst.points->cols(); ++k)
          out << ' ' << format_double((*inst.points)(i, k));
        out << '\n';
      }
    }
  }
  return out.str();
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const std::string& path, const InstanceFile& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize_instance(inst);
}

RedactedInstance load_redacted(const std::string& path) {
  InstanceFile full = load_instance(path);
  return {std::move(full.matrix), full.d};
}

namespace {

std::vector<std::pair<int, int>> shuffled_pairs(int n, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return pairs;
}

}  // namespace

InstanceFile gen_masked_pointcloud(int n, int d, const MaskModel& mask, std::uint64_t seed) {
  if (n < 1 || d < 0) throw InfeasibleMask("invalid instance shape");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd pts(n, std::max(1, d));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < std::max(1, d); ++k) pts(i, k) = d == 0 ? 0.0 : unif(rng);
  if (d == 0) pts = Eigen::MatrixXd::Zero(n, 0);

  PartialMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set(i, j, (pts.row(i) - pts.row(j)).squaredNorm());

  InstanceFile inst;
  inst.d = d;
  inst.seed = seed;

  switch (mask.kind) {
    case MaskModel::Kind::PerRowBudget: {
      if (mask.per_row < 0) throw InfeasibleMask("negative per-row budget");
      std::vector<int> hidden(n, 0);
      for (const auto& [i, j] : shuffled_pairs(n, rng))
        if (hidden[i] < mask.per_row && hidden[j] < mask.per_row) {
          m.unset(i, j);
          ++hidden[i];
          ++hidden[j];
        }
      inst.generator = "masked perrow " + std::to_string(mask.per_row);
      break;
    }
    case MaskModel::Kind::BlockFree: {
      if (mask.t < 1) throw InfeasibleMask("t must be >= 1");
      if (mask.t == 1) {  // only the fully specified matrix excludes a 1-block
        inst.generator = "masked blockfree 1";
        break;
      }
      int budget = n;  // a light mask keeps detection cheap
      for (const auto& [i, j] : shuffled_pairs(n, rng)) {
        if (budget == 0) break;
        m.unset(i, j);
        if (mask.t <= 3 && detect_block_pattern(m, mask.t).has_value())
          m.set(i, j, (pts.row(i) - pts.row(j)).squaredNorm());
        else
          --budget;
      }
      inst.generator = "masked blockfree " + std::to_string(mask.t);
      break;
    }
    case MaskModel::Kind::ChordalGraph: {
      // Incremental simplicial construction: each new vertex attaches to a
      // random subset of a random existing clique.
      std::vector<std::vector<int>> cliques{{0}};
      UnderlyingGraph g(n);
      for (int v = 1; v < n; ++v) {
        const auto& host = cliques[rng() % cliques.size()];
        std::vector<int> sub = host;
        std::shuffle(sub.begin(), sub.end(), rng);
        sub.resize(1 + rng() % sub.size());
        for (int u : sub) g.add_edge(v, u);
        sub.push_back(v);
        std::sort(sub.begin(), sub.end());
        cliques.push_back(std::move(sub));
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (!g.edge(i, j)) m.unset(i, j);
      inst.generator = "masked chordal";
      break;
    }
    case MaskModel::Kind::CliqueCover: {
      if (mask.k < 1 || mask.k > n) throw InfeasibleMask("cover size out of range");
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      // Contiguous chunks of the permutation, each nonempty.
      std::vector<std::vector<int>> chunks(mask.k);
      for (int i = 0; i < n; ++i) chunks[i % mask.k].push_back(perm[i]);
      UnderlyingGraph g(n);
      for (auto& c : chunks) {
        std::sort(c.begin(), c.end());
        for (size_t a = 0; a < c.size(); ++a)
          for (size_t b = a + 1; b < c.size(); ++b) g.add_edge(c[a], c[b]);
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (!g.edge(i, j)) m.unset(i, j);
      inst.cliques = chunks;
      inst.generator = "masked cover " + std::to_string(mask.k);
      break;
    }
    case MaskModel::Kind::ExplicitGraph: {
      if (mask.graph.n() != n) throw InfeasibleMask("explicit graph order mismatch");
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (!mask.graph.edge(i, j)) m.unset(i, j);
      inst.generator = "masked graph";
      break;
    }
  }

  // Post-generation verification of the mask's defining property.
  switch (mask.kind) {
    case MaskModel::Kind::PerRowBudget:
      for (int i = 0; i < n; ++i)
        if (m.row_unspecified(i) > mask.per_row)
          throw InfeasibleMask("per-row budget violated after generation");
      break;
    case MaskModel::Kind::BlockFree:
      if (mask.t <= 3 && detect_block_pattern(m, mask.t).has_value())
        throw InfeasibleMask("block pattern present after generation");
      break;
    case MaskModel::Kind::ChordalGraph:
      if (!chordal(UnderlyingGraph::of(m)))
        throw InfeasibleMask("mask graph is not chordal");
      break;
    case MaskModel::Kind::CliqueCover: {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          if (!m.specified(i, j)) continue;
          bool covered = false;
          for (const auto& c : inst.cliques)
            if (std::find(c.begin(), c.end(), i) != c.end() &&
                std::find(c.begin(), c.end(), j) != c.end()) {
              covered = true;
              break;
            }
          if (!covered) throw InfeasibleMask("cover misses a specified pair");
        }
      break;
    }
    case MaskModel::Kind::ExplicitGraph:
      break;
  }

  inst.matrix = std::move(m);
  inst.points = pts;
  return inst;
}

SaxeParams saxe_params(int n, double eps) {
  SaxeParams p{};
  p.r = 16;
  for (int i = 0; i < 4; ++i) p.r *= n;
  p.s = static_cast<int>(std::ceil(static_cast<double>(n) * n / (2.0 * eps)));
  p.total = n + p.s;
  return p;
}

InstanceFile gen_saxe(const WeightedGraph& g, double eps) {
  const int n = g.n;
  if (n < 1) throw Error("empty graph");
  if (!(eps > 0.0 && eps < 1.0)) throw Error("eps must be in (0,1)");
  for (const auto& [u, v, w] : g.edges) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw Error("bad edge endpoints");
    if (w < 1 || w > 4)
      throw WeightOutOfRange("weight " + std::to_string(w) + " outside {1,2,3,4}");
  }
  {
    UnderlyingGraph conn(n);
    for (const auto& [u, v, w] : g.edges) conn.add_edge(u, v);
    if (conn.connected_components().size() > 1)
      throw Error("the weighted graph must be connected");
  }
  const SaxeParams p = saxe_params(n, eps);
  // Integral chord values: with sin(alpha/2) = 1/(2n) and r = 2^4 n^4, the
  // squared chord of weight w is a polynomial in n with integer coefficients.
  const long long n2 = static_cast<long long>(n) * n;
  const long long base = 256LL * n2 * n2 * n2;  // 2^8 n^6 = r^2 / n^2
  auto chord_sq = [&](int w) -> long long {
    switch (w) {
      case 1:
        return base;
      case 2:
        return 4 * base - 256LL * n2 * n2;
      case 3:
        return 9 * base - 6 * 256LL * n2 * n2 + 256LL * n2;
      case 4:
        return 16 * base - 5 * 1024LL * n2 * n2 + 2048LL * n2 - 256LL;
      default:
        return 0;
    }
  };
  const int total = p.total;
  PartialMatrix m(total);
  for (const auto& [u, v, w] : g.edges) m.set(u, v, static_cast<double>(chord_sq(w)));
  const double r2 = static_cast<double>(p.r) * static_cast<double>(p.r);
  for (int i = 0; i < n; ++i)
    for (int a = n; a < total; ++a) m.set(i, a, r2);
  for (int a = n; a < total; ++a)
    for (int b = a + 1; b < total; ++b) m.set(a, b, 0.0);

  InstanceFile inst;
  inst.matrix = std::move(m);
  inst.d = 2;
  inst.generator = "saxe n=" + std::to_string(n) + " eps=" + format_double(eps) +
                   " r=" + std::to_string(p.r);
  return inst;
}

namespace {

// Classical-scaling start: squared distances from shortest paths over the
// specified entries, double-centered, top-d eigenvectors.
Eigen::MatrixXd mds_init(const PartialMatrix& m, int d) {
  const int n = m.n();
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, inf);
  double longest = 0.0;
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j)
      if (m.specified(i, j)) {
        dist(i, j) = dist(j, i) = std::sqrt(m.at(i, j));
        longest = std::max(longest, dist(i, j));
      }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (dist(i, k) + dist(k, j) < dist(i, j)) dist(i, j) = dist(i, k) + dist(k, j);
  double reach = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::isfinite(dist(i, j))) reach = std::max(reach, dist(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(dist(i, j))) dist(i, j) = 1.5 * reach + 1.0;  // disconnected
  Eigen::MatrixXd sq = dist.array().square();
  const Eigen::MatrixXd j =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd gram = -0.5 * j * sq * j;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n, d);
  for (int c = 0; c < d; ++c) {
    const int idx = n - 1 - c;
    if (idx < 0) break;
    const double ev = es.eigenvalues()(idx);
    if (ev <= 0) break;
    pts.col(c) = std::sqrt(ev) * es.eigenvectors().col(idx);
  }
  return pts;
}

double oracle_objective(const PartialMatrix& m, const Eigen::MatrixXd& pts) {
  double acc = 0.0;
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j)
      if (m.specified(i, j)) {
        const double r = (pts.row(i) - pts.row(j)).squaredNorm() - m.at(i, j);
        acc += r * r;
      }
  return acc;
}

void oracle_gradient(const PartialMatrix& m, const Eigen::MatrixXd& pts,
                     Eigen::MatrixXd& grad) {
  grad.setZero();
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j)
      if (m.specified(i, j)) {
        const Eigen::RowVectorXd diff = pts.row(i) - pts.row(j);
        const double r = diff.squaredNorm() - m.at(i, j);
        grad.row(i) += 4.0 * r * diff;
        grad.row(j) -= 4.0 * r * diff;
      }
}

// Gradient descent with backtracking, then Gauss-Newton on the residuals.
bool oracle_minimize(const PartialMatrix& m, Eigen::MatrixXd& pts, int max_iters,
                     double accept) {
  const int n = m.n(), d = static_cast<int>(pts.cols());
  double f = oracle_objective(m, pts);
  double step = 0.05;
  Eigen::MatrixXd grad(n, d), trial(n, d);
  for (int it = 0; it < max_iters && f > 1e-30; ++it) {
    oracle_gradient(m, pts, grad);
    const double gn = grad.norm();
    if (gn < 1e-300) break;
    bool improved = false;
    for (int bt = 0; bt < 24; ++bt) {
      trial = pts - (step / gn) * grad;
      const double ft = oracle_objective(m, trial);
      if (ft < f) {
        pts = trial;
        f = ft;
        step *= 1.5;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  // Gauss-Newton polish.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (m.specified(i, j)) pairs.emplace_back(i, j);
  const int nv = n * d;
  for (int gn_it = 0; gn_it < 30 && f > 1e-30; ++gn_it) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<int>(pairs.size()), nv);
    Eigen::VectorXd resid(static_cast<int>(pairs.size()));
    for (size_t e = 0; e < pairs.size(); ++e) {
      const auto [i, j] = pairs[e];
      const Eigen::RowVectorXd diff = pts.row(i) - pts.row(j);
      resid(static_cast<int>(e)) = diff.squaredNorm() - m.at(i, j);
      for (int k = 0; k < d; ++k) {
        jac(static_cast<int>(e), i * d + k) = 2.0 * diff(k);
        jac(static_cast<int>(e), j * d + k) = -2.0 * diff(k);
      }
    }
    const Eigen::MatrixXd jtj =
        jac.transpose() * jac + 1e-10 * Eigen::MatrixXd::Identity(nv, nv);
    const Eigen::VectorXd delta = jtj.ldlt().solve(jac.transpose() * resid);
    bool better = false;
    double scale = 1.0;
    for (int bt = 0; bt < 12; ++bt) {
      trial = pts;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k) trial(i, k) -= scale * delta(i * d + k);
      const double ft = oracle_objective(m, trial);
      if (ft < f) {
        pts = trial;
        f = ft;
        better = true;
        break;
      }
      scale *= 0.5;
    }
    if (!better) break;
  }
  return realization_residual(m, pts) <= accept;
}

}  // namespace

OracleResult oracle_solve(const PartialMatrix& raw, int d, const OracleOptions& opts,
                          const Tolerances& tol) {
  const int n = raw.n();
  const double scale = raw.max_abs_entry();
  // Work on the normalized copy; rescale accepted points at the end.
  PartialMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (raw.specified(i, j)) m.set(i, j, scale > 0 ? raw.at(i, j) / scale : raw.at(i, j));
  const double accept = tol.real;  // relative residual on the normalized copy
  const double span = 2.0;

  OracleResult out;
  std::atomic<int> winner{-1};
  auto run_restart = [&](int idx) -> std::optional<Eigen::MatrixXd> {
    Eigen::MatrixXd pts;
    if (idx == 0 && d > 0) {
      pts = mds_init(m, d);
    } else {
      std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(idx));
      std::uniform_real_distribution<double> unif(0.0, span);
      pts = Eigen::MatrixXd(n, d);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k) pts(i, k) = unif(rng);
    }
    if (oracle_minimize(m, pts, opts.max_iterations, accept)) return pts;
    return std::nullopt;
  };

  const int threads = std::max(1, opts.threads);
  for (int base = 0; base < opts.restarts && winner.load() < 0; base += threads) {
    const int batch = std::min(threads, opts.restarts - base);
    std::vector<std::future<std::optional<Eigen::MatrixXd>>> futs;
    for (int t = 1; t < batch; ++t)
      futs.push_back(std::async(std::launch::async, run_restart, base + t));
    std::optional<Eigen::MatrixXd> first = run_restart(base);
    std::vector<std::optional<Eigen::MatrixXd>> results(batch);
    results[0] = std::move(first);
    for (int t = 1; t < batch; ++t) results[t] = futs[t - 1].get();
    for (int t = 0; t < batch; ++t) {
      if (results[t]) {
        winner.store(base + t);
        out.points = std::move(*results[t]);
        break;
      }
    }
    out.restarts_used = std::min(opts.restarts, base + batch);
  }
  if (winner.load() >= 0) {
    if (scale > 0 && scale != 1.0) out.points *= std::sqrt(scale);
    out.kind = OracleResult::Kind::Yes;
    return out;
  }
  // Certification scan: a fully specified clique that fails realize refutes
  // every completion.
  const UnderlyingGraph g = UnderlyingGraph::of(raw);
  for (const auto& clique : g.maximal_cliques()) {
    if (!embeddable(raw.submatrix(clique), d, tol)) {
      out.kind = OracleResult::Kind::NoCertified;
      out.witness_clique = clique;
      return out;
    }
  }
  out.kind = OracleResult::Kind::Unknown;  // heuristic no stays unknown
  return out;
}

}  // namespace edmc
