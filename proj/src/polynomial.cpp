#include "edmc/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace edmc {

int VarTable::pair_var(int u, int v) {
  if (u > v) std::swap(u, v);
  const auto key = std::make_pair(u, v);
  const auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  vars_.push_back({u, v});
  index_[key] = size() - 1;
  return size() - 1;
}

int VarTable::ordered_var(int u, int v) {
  const auto key = std::make_pair(u, v);
  const auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  vars_.push_back({u, v});
  index_[key] = size() - 1;
  return size() - 1;
}

int VarTable::find_pair(int u, int v) const {
  if (u > v) std::swap(u, v);
  const auto it = index_.find({u, v});
  return it == index_.end() ? -1 : it->second;
}

int VarTable::find_ordered(int u, int v) const {
  const auto it = index_.find({u, v});
  return it == index_.end() ? -1 : it->second;
}

std::string VarTable::name(int id) const {
  return "z" + std::to_string(vars_[id].u + 1) + "_" + std::to_string(vars_[id].v + 1);
}

AugmentedPolynomial AugmentedPolynomial::constant(double c) {
  AugmentedPolynomial p;
  if (c != 0.0) p.terms_[{}] = c;
  return p;
}

AugmentedPolynomial AugmentedPolynomial::variable(int var_id) {
  AugmentedPolynomial p;
  p.terms_[{{var_id, 1}}] = 1.0;
  return p;
}

AugmentedPolynomial AugmentedPolynomial::operator+(const AugmentedPolynomial& o) const {
  AugmentedPolynomial out = *this;
  for (const auto& [mono, c] : o.terms_) {
    const double v = (out.terms_[mono] += c);
    if (v == 0.0) out.terms_.erase(mono);
  }
  return out;
}

AugmentedPolynomial AugmentedPolynomial::operator-(const AugmentedPolynomial& o) const {
  return *this + o.scaled(-1.0);
}

AugmentedPolynomial AugmentedPolynomial::operator*(const AugmentedPolynomial& o) const {
  AugmentedPolynomial out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m;
      size_t i = 0, j = 0;
      while (i < ma.size() || j < mb.size()) {
        if (j == mb.size() || (i < ma.size() && ma[i].first < mb[j].first))
          m.push_back(ma[i++]);
        else if (i == ma.size() || mb[j].first < ma[i].first)
          m.push_back(mb[j++]);
        else {
          m.emplace_back(ma[i].first, ma[i].second + mb[j].second);
          ++i;
          ++j;
        }
      }
      const double v = (out.terms_[m] += ca * cb);
      if (v == 0.0) out.terms_.erase(m);
    }
  }
  return out;
}

AugmentedPolynomial AugmentedPolynomial::scaled(double c) const {
  AugmentedPolynomial out;
  if (c == 0.0) return out;
  for (const auto& [m, v] : terms_) out.terms_[m] = v * c;
  return out;
}

bool AugmentedPolynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

double AugmentedPolynomial::constant_value() const {
  return terms_.empty() ? 0.0 : terms_.begin()->second;
}

int AugmentedPolynomial::degree() const {
  int deg = 0;
  for (const auto& [m, c] : terms_) {
    int d = 0;
    for (const auto& [var, e] : m) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

double AugmentedPolynomial::eval(const std::vector<double>& values) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (const auto& [var, e] : m)
      for (int k = 0; k < e; ++k) t *= values[var];
    acc += t;
  }
  return acc;
}

void AugmentedPolynomial::eval_gradient(const std::vector<double>& values, double weight,
                                        std::vector<double>& grad) const {
  for (const auto& [m, c] : terms_) {
    for (size_t target = 0; target < m.size(); ++target) {
      double t = weight * c * m[target].second;
      for (size_t i = 0; i < m.size(); ++i) {
        const int reps = m[i].second - (i == target ? 1 : 0);
        for (int k = 0; k < reps; ++k) t *= values[m[i].first];
      }
      grad[m[target].first] += t;
    }
  }
}

namespace {

Interval ival_mul(const Interval& a, const Interval& b) {
  const double c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
  return {std::min(std::min(c1, c2), std::min(c3, c4)),
          std::max(std::max(c1, c2), std::max(c3, c4))};
}

}  // namespace

Interval AugmentedPolynomial::eval_interval(const std::vector<Interval>& box) const {
  Interval acc{0.0, 0.0};
  for (const auto& [m, c] : terms_) {
    Interval t{c, c};
    for (const auto& [var, e] : m)
      for (int k = 0; k < e; ++k) t = ival_mul(t, box[var]);
    acc.lo += t.lo;
    acc.hi += t.hi;
  }
  // Outward slack for accumulated rounding; bounds stay conservative.
  const double pad = 1e-12 * (std::abs(acc.lo) + std::abs(acc.hi)) + 1e-300;
  acc.lo -= pad;
  acc.hi += pad;
  return acc;
}

double AugmentedPolynomial::magnitude_bound(double hi) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = std::abs(c);
    for (const auto& [var, e] : m)
      for (int k = 0; k < e; ++k) t *= std::max(1.0, hi);
    acc += t;
  }
  return std::max(1.0, acc);
}

std::vector<int> AugmentedPolynomial::variables() const {
  std::vector<int> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [var, e] : m) out.push_back(var);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Determinant of a small polynomial matrix by Laplace expansion memoized
// over column subsets.
AugmentedPolynomial poly_det(const std::vector<std::vector<AugmentedPolynomial>>& a) {
  const int m = static_cast<int>(a.size());
  if (m == 0) return AugmentedPolynomial::constant(1.0);
  const uint32_t full = (1u << m) - 1;
  std::vector<AugmentedPolynomial> memo(static_cast<size_t>(full) + 1);
  memo[0] = AugmentedPolynomial::constant(1.0);
  for (uint32_t mask = 1; mask <= full; ++mask) {
    const int row = m - __builtin_popcount(mask);
    AugmentedPolynomial acc;
    double sign = 1.0;
    for (int c = 0; c < m; ++c) {
      if (!(mask & (1u << c))) continue;
      const AugmentedPolynomial& entry = a[row][c];
      if (!(entry.is_constant() && entry.constant_value() == 0.0))
        acc = acc + (entry * memo[mask & ~(1u << c)]).scaled(sign);
      sign = -sign;
    }
    memo[mask] = std::move(acc);
  }
  return memo[full];
}

}  // namespace

AugmentedPolynomial build_augmented_cm(const PartialMatrix& m, const std::vector<int>& indices,
                                       VarTable& vars, bool split_pairs) {
  const int r = static_cast<int>(indices.size());
  if (r == 0) throw Error("build_augmented_cm requires at least one index");
  if (r + 1 > 20) throw Error("augmented determinant too large to expand");
  std::vector<std::vector<AugmentedPolynomial>> b(
      r + 1, std::vector<AugmentedPolynomial>(r + 1, AugmentedPolynomial::constant(0.0)));
  for (int i = 0; i < r; ++i) b[0][i + 1] = b[i + 1][0] = AugmentedPolynomial::constant(1.0);
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const int u = indices[i], v = indices[j];
      if (m.specified(u, v)) {
        b[i + 1][j + 1] = b[j + 1][i + 1] = AugmentedPolynomial::constant(m.at(u, v));
      } else if (split_pairs) {
        const int zf = vars.find_ordered(std::min(u, v), std::max(u, v));
        const int zb = vars.find_ordered(std::max(u, v), std::min(u, v));
        if (zf < 0 || zb < 0) throw UnhousedPair(u, v);
        b[i + 1][j + 1] = AugmentedPolynomial::variable(u < v ? zf : zb);
        b[j + 1][i + 1] = AugmentedPolynomial::variable(u < v ? zb : zf);
      } else {
        const int z = vars.find_pair(u, v);
        if (z < 0) throw UnhousedPair(u, v);
        b[i + 1][j + 1] = b[j + 1][i + 1] = AugmentedPolynomial::variable(z);
      }
    }
  }
  return poly_det(b);
}

}  // namespace edmc
