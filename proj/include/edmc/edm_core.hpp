#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "edmc/partial_matrix.hpp"

namespace edmc {

/// Points realizing a distance matrix: row i of `points` is p_i in R^dim.
struct Realization {
  int dim = 0;
  Eigen::MatrixXd points;  // n x dim

  double squared_distance(int i, int j) const {
    return (points.row(i) - points.row(j)).squaredNorm();
  }
};

struct NotEmbeddable {
  enum class Reason { NegativeEigenvalue, RankExceeded };
  Reason reason;
  double eigenvalue = 0.0;  // offending negative eigenvalue
  int rank_above = 0;       // eigenvalues above threshold when rank is exceeded
};

using RealizeResult = std::variant<Realization, NotEmbeddable>;

inline bool realized(const RealizeResult& r) { return std::holds_alternative<Realization>(r); }

/// Index subset certifying unique extension of embeddings. rank() is the
/// strong embedding dimension of the indexed principal submatrix.
struct MetricBasis {
  std::vector<int> indices;
  int rank() const { return static_cast<int>(indices.size()) - 1; }
};

/// Cayley-Menger determinant of the points indexed by I: determinant of the
/// (|I|+1) x (|I|+1) matrix whose first row/column is (0,1,...,1) and whose
/// inner block holds the squared distances. Every pair within I must be
/// specified (UnspecifiedEntry otherwise).
double cm_determinant(const PartialMatrix& m, const std::vector<int>& indices);

/// Outcome of the sign-alternation scan over Cayley-Menger determinants:
/// either the matrix is an EDM with the stated strong embedding dimension and
/// greedy basis, or it is not a distance matrix of any Euclidean space.
struct EmbeddingClass {
  bool is_edm = false;
  int strong_dim = -1;
  std::vector<int> basis;  // greedy maximal independent set, ascending scan
};

EmbeddingClass classify_embedding(const PartialMatrix& m,
                                  const Tolerances& tol = Tolerances::defaults());

/// True iff the complete matrix is r-embeddable but not (r-1)-embeddable.
bool is_strongly_embeddable(const PartialMatrix& m, int r,
                            const Tolerances& tol = Tolerances::defaults());

/// Smallest d such that the complete matrix embeds into R^d. Throws NotEDM.
int embedding_dimension(const PartialMatrix& m,
                        const Tolerances& tol = Tolerances::defaults());

/// True iff the principal submatrix on S is strongly (|S|-1)-embeddable.
bool is_independent(const PartialMatrix& m, const std::vector<int>& subset,
                    const Tolerances& tol = Tolerances::defaults());

/// Greedy maximal independent set in ascending index order. Throws NotEDM.
MetricBasis metric_basis(const PartialMatrix& m,
                         const Tolerances& tol = Tolerances::defaults());

/// Maximal independent superset of `base` within `universe` (greedy exchange,
/// ascending index order). Throws NotIndependent if `base` is dependent.
MetricBasis extend_basis(const PartialMatrix& m, const std::vector<int>& base,
                         const std::vector<int>& universe,
                         const Tolerances& tol = Tolerances::defaults());

/// Decides d-embeddability of a complete matrix via the anchored Gram route
/// (G_ij = (m_1i + m_1j - m_ij)/2, symmetric eigendecomposition; accept iff
/// eigenvalues >= -tau_eig with at most d above tau_eig) and constructs the
/// coordinates. The anchor is the first index; this variant is normative.
RealizeResult realize(const PartialMatrix& m, int d,
                      const Tolerances& tol = Tolerances::defaults());

/// Double-centering variant, exposed for conditioning comparisons.
RealizeResult realize_centered(const PartialMatrix& m, int d,
                               const Tolerances& tol = Tolerances::defaults());

inline bool embeddable(const PartialMatrix& m, int d,
                       const Tolerances& tol = Tolerances::defaults()) {
  return realized(realize(m, d, tol));
}

/// Largest entrywise |squared-distance residual| of points against the
/// specified entries of m.
double realization_residual(const PartialMatrix& m, const Eigen::MatrixXd& points);

/// Optimal rigid alignment (orthogonal Procrustes over O(d), translation
/// included) of p onto q; returns the largest pointwise deviation afterwards.
double procrustes_residual(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q);

}  // namespace edmc
