#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "edmc/partial_matrix.hpp"

namespace edmc::test {

// Complete squared-distance matrix of a point set (rows are points).
inline PartialMatrix matrix_of_points(const Eigen::MatrixXd& pts) {
  const int n = static_cast<int>(pts.rows());
  PartialMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m.set(i, j, (pts.row(i) - pts.row(j)).squaredNorm());
  return m;
}

inline Eigen::MatrixXd random_points(int n, int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = unif(rng);
  return pts;
}

// n points pairwise at squared distance 1 (unit regular (n-1)-simplex).
inline PartialMatrix unit_simplex(int n) {
  PartialMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set(i, j, 1.0);
  return m;
}

// Squared distances of collinear points at positions xs on a line.
inline PartialMatrix collinear(const std::vector<double>& xs) {
  const int n = static_cast<int>(xs.size());
  PartialMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set(i, j, (xs[i] - xs[j]) * (xs[i] - xs[j]));
  return m;
}

// The worked 4-point example: triangle 1-2-3 with a pendant vertex 4.
inline PartialMatrix paper_a_matrix() {
  PartialMatrix m(4);
  m.set(0, 1, 1.0);
  m.set(0, 2, 1.25);
  m.set(1, 2, 1.25);
  m.set(2, 3, 1.0);
  return m;
}

inline PartialMatrix paper_d_matrix() {
  PartialMatrix m = paper_a_matrix();
  m.set(0, 3, 4.25);
  m.set(1, 3, 4.25);
  return m;
}

inline Eigen::MatrixXd paper_caption_points() {
  Eigen::MatrixXd p(4, 2);
  p << 0, 0, 1, 0, 0.5, 1, 0.5, 2;
  return p;
}

}  // namespace edmc::test
