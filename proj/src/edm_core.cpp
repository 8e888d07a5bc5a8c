#include "edmc/edm_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace edmc {

namespace {

// Determinant by Laplace expansion memoized over column subsets. Exact for
// integer-valued inputs (products and sums only), which the fixed goldens
// rely on. Sizes here are small: the matrix is (|I|+1) x (|I|+1).
double det_subset_expansion(const Eigen::MatrixXd& a) {
  const int m = static_cast<int>(a.rows());
  if (m == 0) return 1.0;
  const uint32_t full = (1u << m) - 1;
  // memo[mask] = det of rows [m-popcount(mask), m) x columns(mask). Every
  // proper submask of a mask is numerically smaller, so one increasing pass
  // suffices.
  std::vector<double> memo(static_cast<size_t>(full) + 1, 0.0);
  memo[0] = 1.0;
  for (uint32_t mask = 1; mask <= full; ++mask) {
    const int row = m - __builtin_popcount(mask);
    double acc = 0.0;
    double sign = 1.0;
    for (int c = 0; c < m; ++c) {
      if (!(mask & (1u << c))) continue;
      const double entry = a(row, c);
      if (entry != 0.0) acc += sign * entry * memo[mask & ~(1u << c)];
      sign = -sign;
    }
    memo[mask] = acc;
  }
  return memo[full];
}

double det_small(const Eigen::MatrixXd& a) {
  if (a.rows() <= 13) return det_subset_expansion(a);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant();
}

Eigen::MatrixXd bordered_cm_matrix(const PartialMatrix& m, const std::vector<int>& idx) {
  const int r = static_cast<int>(idx.size());
  Eigen::MatrixXd b(r + 1, r + 1);
  b(0, 0) = 0.0;
  for (int i = 0; i < r; ++i) b(0, i + 1) = b(i + 1, 0) = 1.0;
  for (int i = 0; i < r; ++i) {
    b(i + 1, i + 1) = 0.0;
    for (int j = i + 1; j < r; ++j) b(i + 1, j + 1) = b(j + 1, i + 1) = m.at(idx[i], idx[j]);
  }
  return b;
}

}  // namespace

double cm_determinant(const PartialMatrix& m, const std::vector<int>& indices) {
  if (indices.empty()) throw Error("cm_determinant requires at least one index");
  return det_small(bordered_cm_matrix(m, indices));
}

namespace {

// Sign test for extending an independent chain by one point: with |chain|+1
// points the alternation condition reads (-1)^(j+1) CM > 0 for j = |chain|.
// Distances are pre-normalized by the caller, so thresholds use scale 1.
enum class ChainStep { Extends, Dependent, WrongSign };

ChainStep chain_step(const PartialMatrix& m, std::vector<int>& chain, int cand,
                     const Tolerances& tol) {
  chain.push_back(cand);
  const double cm = cm_determinant(m, chain);
  chain.pop_back();
  const int j = static_cast<int>(chain.size());  // new point has index j in the chain
  const double want = (j % 2 == 1) ? cm : -cm;   // (-1)^(j+1) cm
  const double thr = tol.cm_threshold(1.0, static_cast<int>(chain.size()) + 1);
  if (want > thr) return ChainStep::Extends;
  if (std::abs(cm) <= thr) return ChainStep::Dependent;
  return ChainStep::WrongSign;
}

PartialMatrix normalized_copy(const PartialMatrix& m, double* scale_out) {
  const double scale = m.max_abs_entry();
  *scale_out = scale;
  if (scale == 0.0 || scale == 1.0) return m;
  PartialMatrix out(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j)
      if (m.specified(i, j)) out.set(i, j, m.at(i, j) / scale);
  return out;
}

}  // namespace

EmbeddingClass classify_embedding(const PartialMatrix& raw, const Tolerances& tol) {
  double scale = 0.0;
  const PartialMatrix m = normalized_copy(raw, &scale);
  const int n = m.n();
  EmbeddingClass out;
  if (n == 0) {
    out.is_edm = true;
    out.strong_dim = -1;  // empty set embeds everywhere
    return out;
  }
  std::vector<int> chain{0};
  std::vector<char> in_chain(n, 0);
  in_chain[0] = 1;
  for (int v = 1; v < n; ++v) {
    switch (chain_step(m, chain, v, tol)) {
      case ChainStep::Extends:
        chain.push_back(v);
        in_chain[v] = 1;
        break;
      case ChainStep::Dependent:
        break;
      case ChainStep::WrongSign:
        return out;  // not a Euclidean distance matrix in any dimension
    }
  }
  // Blumenthal's residual conditions: every leftover point, alone and in
  // pairs, must have a vanishing augmented determinant over the chain.
  std::vector<int> rest;
  for (int v = 0; v < n; ++v)
    if (!in_chain[v]) rest.push_back(v);
  std::vector<int> probe = chain;
  for (int x : rest) {
    probe.push_back(x);
    const double cm = cm_determinant(m, probe);
    probe.pop_back();
    if (std::abs(cm) > tol.cm_threshold(1.0, static_cast<int>(probe.size()) + 1)) return out;
  }
  for (size_t a = 0; a < rest.size(); ++a) {
    probe.push_back(rest[a]);
    for (size_t b = a + 1; b < rest.size(); ++b) {
      probe.push_back(rest[b]);
      const double cm = cm_determinant(m, probe);
      probe.pop_back();
      if (std::abs(cm) > tol.cm_threshold(1.0, static_cast<int>(probe.size()) + 1)) {
        return out;
      }
    }
    probe.pop_back();
  }
  out.is_edm = true;
  out.strong_dim = static_cast<int>(chain.size()) - 1;
  out.basis = chain;
  return out;
}

bool is_strongly_embeddable(const PartialMatrix& m, int r, const Tolerances& tol) {
  const EmbeddingClass c = classify_embedding(m, tol);
  return c.is_edm && c.strong_dim == r;
}

int embedding_dimension(const PartialMatrix& m, const Tolerances& tol) {
  const EmbeddingClass c = classify_embedding(m, tol);
  if (!c.is_edm) throw NotEDM();
  return c.strong_dim;
}

bool is_independent(const PartialMatrix& m, const std::vector<int>& subset,
                    const Tolerances& tol) {
  if (subset.empty()) return true;  // empty set is embeddable everywhere
  const EmbeddingClass c = classify_embedding(m.submatrix(subset), tol);
  return c.is_edm && c.strong_dim == static_cast<int>(subset.size()) - 1;
}

MetricBasis metric_basis(const PartialMatrix& m, const Tolerances& tol) {
  const EmbeddingClass c = classify_embedding(m, tol);
  if (!c.is_edm) throw NotEDM();
  return MetricBasis{c.basis};
}

MetricBasis extend_basis(const PartialMatrix& raw, const std::vector<int>& base,
                         const std::vector<int>& universe, const Tolerances& tol) {
  if (!is_independent(raw, base, tol)) throw NotIndependent();
  double scale = 0.0;
  const PartialMatrix m = normalized_copy(raw, &scale);
  std::vector<int> chain = base;
  std::vector<char> used(m.n(), 0);
  for (int v : base) used[v] = 1;
  std::vector<int> order = universe;
  std::sort(order.begin(), order.end());
  for (int v : order) {
    if (v < 0 || v >= m.n() || used[v]) continue;
    if (chain.empty()) {
      chain.push_back(v);
      used[v] = 1;
      continue;
    }
    if (chain_step(m, chain, v, tol) == ChainStep::Extends) {
      chain.push_back(v);
      used[v] = 1;
    }
  }
  return MetricBasis{chain};
}

namespace {

RealizeResult realize_from_gram(const Eigen::MatrixXd& gram, const PartialMatrix& norm,
                                double scale, int d, int anchor, const Tolerances& tol) {
  const int k = static_cast<int>(gram.rows());
  const int n = norm.n();
  const double thr = tol.eig_threshold(1.0);
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
  if (k > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
    if (evals(0) < -thr)
      return NotEmbeddable{NotEmbeddable::Reason::NegativeEigenvalue, evals(0) * scale, 0};
    int above = 0;
    for (int i = 0; i < k; ++i)
      if (evals(i) > thr) ++above;
    if (above > d) return NotEmbeddable{NotEmbeddable::Reason::RankExceeded, 0.0, above};
  }
  Realization r;
  r.dim = d;
  r.points = Eigen::MatrixXd::Zero(n, d);
  // Columns from the largest eigenvalues; eigenvalues come back ascending.
  int col = 0;
  for (int i = k - 1; i >= 0 && col < d; --i) {
    if (evals(i) <= thr) break;
    const double s = std::sqrt(evals(i));
    int row = 0;
    for (int v = 0; v < n; ++v) {
      if (v == anchor) continue;
      r.points(v, col) = s * evecs(row, i);
      ++row;
    }
    ++col;
  }
  if (scale != 1.0 && scale != 0.0) r.points *= std::sqrt(scale);
  return r;
}

}  // namespace

RealizeResult realize(const PartialMatrix& raw, int d, const Tolerances& tol) {
  double scale = 0.0;
  const PartialMatrix m = normalized_copy(raw, &scale);
  const int n = m.n();
  const int anchor = 0;
  Eigen::MatrixXd gram(std::max(0, n - 1), std::max(0, n - 1));
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j)
      gram(i - 1, j - 1) = 0.5 * (m.at(anchor, i) + m.at(anchor, j) - m.at(i, j));
  RealizeResult res = realize_from_gram(gram, m, scale == 0.0 ? 1.0 : scale, d, anchor, tol);
  if (realized(res)) {
    // The Gram acceptance and the reconstructed distances must agree; a
    // violation here means the tolerances are miscalibrated.
    const double resid = realization_residual(raw, std::get<Realization>(res).points);
    if (resid > tol.real_threshold(raw.max_abs_entry()))
      throw InternalGlueError("realization residual " + std::to_string(resid) +
                              " exceeds tolerance after Gram acceptance");
  }
  return res;
}

RealizeResult realize_centered(const PartialMatrix& raw, int d, const Tolerances& tol) {
  double scale = 0.0;
  const PartialMatrix m = normalized_copy(raw, &scale);
  const int n = m.n();
  Eigen::MatrixXd dmat(n, n);
  for (int i = 0; i < n; ++i) {
    dmat(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) dmat(i, j) = dmat(j, i) = m.at(i, j);
  }
  const Eigen::MatrixXd j =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd gram = -0.5 * j * dmat * j;
  const double thr = tol.eig_threshold(1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd evals = es.eigenvalues();
  if (evals(0) < -thr)
    return NotEmbeddable{NotEmbeddable::Reason::NegativeEigenvalue,
                         evals(0) * (scale == 0.0 ? 1.0 : scale), 0};
  int above = 0;
  for (int i = 0; i < n; ++i)
    if (evals(i) > thr) ++above;
  if (above > d) return NotEmbeddable{NotEmbeddable::Reason::RankExceeded, 0.0, above};
  Realization r;
  r.dim = d;
  r.points = Eigen::MatrixXd::Zero(n, d);
  int col = 0;
  for (int i = n - 1; i >= 0 && col < d; --i) {
    if (evals(i) <= thr) break;
    r.points.col(col) = std::sqrt(evals(i)) * es.eigenvectors().col(i);
    ++col;
  }
  if (scale != 0.0 && scale != 1.0) r.points *= std::sqrt(scale);
  return r;
}

double realization_residual(const PartialMatrix& m, const Eigen::MatrixXd& points) {
  double worst = 0.0;
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j)
      if (m.specified(i, j)) {
        const double got = (points.row(i) - points.row(j)).squaredNorm();
        worst = std::max(worst, std::abs(got - m.at(i, j)));
      }
  return worst;
}

double procrustes_residual(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  const Eigen::RowVectorXd pc = p.colwise().mean();
  const Eigen::RowVectorXd qc = q.colwise().mean();
  const Eigen::MatrixXd a = p.rowwise() - pc;
  const Eigen::MatrixXd b = q.rowwise() - qc;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
  const Eigen::MatrixXd aligned = a * rot;
  double worst = 0.0;
  for (int i = 0; i < p.rows(); ++i)
    worst = std::max(worst, (aligned.row(i) - b.row(i)).norm());
  return worst;
}

}  // namespace edmc
