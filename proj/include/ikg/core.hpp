#pragma once

// Finite-alphabet joint distributions, information measures (nats), the two
// 2-parameter charts of a lower set, and XY-absolute continuity.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ikg/error.hpp"

namespace ikg {

inline constexpr double kProbTol = 1e-9;
inline constexpr double kLn2 = 0.69314718055994530942;

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// p ln p with the continuous extension 0 ln 0 = 0.
inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

namespace detail {

inline void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
  }
}

inline double unchecked_entropy(std::span<const double> p) {
  CompensatedSum acc;
  for (double v : p) acc.add(-xlogx(v));
  return acc.value();
}

}  // namespace detail

/// Shannon entropy in nats of a probability vector.
inline double entropy(std::span<const double> dist) {
  double total = 0.0;
  for (double v : dist) {
    if (!(v >= -kProbTol)) throw InvalidDistribution("negative probability entry");
    total += v;
  }
  if (dist.empty() || std::abs(total - 1.0) > kProbTol) {
    throw InvalidDistribution("probability vector does not sum to 1");
  }
  CompensatedSum acc;
  for (double v : dist) acc.add(-xlogx(std::max(v, 0.0) / total));
  return acc.value();
}

inline double binary_entropy(double p) {
  detail::check_probability(p, "binary_entropy argument");
  return -xlogx(p) - xlogx(1.0 - p);
}

/// a*b = (1-a)b + a(1-b).
inline double binary_convolution(double a, double b) {
  detail::check_probability(a, "binary_convolution argument");
  detail::check_probability(b, "binary_convolution argument");
  return (1.0 - a) * b + a * (1.0 - b);
}

/// Joint probability matrix on a finite alphabet, row index x, column index y.
/// Entries are validated to 1e-9 and renormalized to sum exactly to one.
class JointDist {
 public:
  JointDist(std::size_t rows, std::size_t cols, std::vector<double> entries,
            std::vector<std::string> labels_x = {}, std::vector<std::string> labels_y = {})
      : rows_(rows), cols_(cols), p_(std::move(entries)), labels_x_(std::move(labels_x)),
        labels_y_(std::move(labels_y)) {
    if (rows_ == 0 || cols_ == 0 || p_.size() != rows_ * cols_) {
      throw InvalidDistribution("matrix shape does not match entry count");
    }
    if (!labels_x_.empty() && labels_x_.size() != rows_) {
      throw InvalidDistribution("labels_x length differs from row count");
    }
    if (!labels_y_.empty() && labels_y_.size() != cols_) {
      throw InvalidDistribution("labels_y length differs from column count");
    }
    CompensatedSum total;
    for (double& v : p_) {
      if (!std::isfinite(v) || v < -kProbTol) throw InvalidDistribution("negative or non-finite entry");
      v = std::max(v, 0.0);
      total.add(v);
    }
    const double t = total.value();
    if (std::abs(t - 1.0) > kProbTol) {
      throw InvalidDistribution("entries sum to " + std::to_string(t) + ", expected 1");
    }
    for (double& v : p_) v /= t;
  }

  static JointDist from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InvalidDistribution("empty matrix");
    const std::size_t n = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * n);
    for (const auto& r : rows) {
      if (r.size() != n) throw InvalidDistribution("ragged matrix rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return JointDist(rows.size(), n, std::move(flat));
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] double operator()(std::size_t x, std::size_t y) const { return p_[x * cols_ + y]; }
  [[nodiscard]] std::span<const double> entries() const { return p_; }
  [[nodiscard]] const std::vector<std::string>& labels_x() const { return labels_x_; }
  [[nodiscard]] const std::vector<std::string>& labels_y() const { return labels_y_; }

  [[nodiscard]] std::vector<double> marginal_x() const {
    std::vector<double> m(rows_, 0.0);
    for (std::size_t x = 0; x < rows_; ++x)
      for (std::size_t y = 0; y < cols_; ++y) m[x] += (*this)(x, y);
    return m;
  }

  [[nodiscard]] std::vector<double> marginal_y() const {
    std::vector<double> m(cols_, 0.0);
    for (std::size_t x = 0; x < rows_; ++x)
      for (std::size_t y = 0; y < cols_; ++y) m[y] += (*this)(x, y);
    return m;
  }

  [[nodiscard]] JointDist transposed() const {
    std::vector<double> t(p_.size());
    for (std::size_t x = 0; x < rows_; ++x)
      for (std::size_t y = 0; y < cols_; ++y) t[y * rows_ + x] = (*this)(x, y);
    return JointDist(cols_, rows_, std::move(t), labels_y_, labels_x_);
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> p_;
  std::vector<std::string> labels_x_;
  std::vector<std::string> labels_y_;
};

inline JointDist product_distribution(std::span<const double> px, std::span<const double> py) {
  std::vector<double> e;
  e.reserve(px.size() * py.size());
  for (double a : px)
    for (double b : py) e.push_back(a * b);
  return JointDist(px.size(), py.size(), std::move(e));
}

/// Equiprobable binary X with Y = X flipped with probability eps.
inline JointDist bss(double eps) {
  detail::check_probability(eps, "crossover probability");
  const double a = 0.5 * (1.0 - eps), b = 0.5 * eps;
  return JointDist(2, 2, {a, b, b, a});
}

inline double joint_entropy(const JointDist& p) { return detail::unchecked_entropy(p.entries()); }
inline double entropy_x(const JointDist& p) { return detail::unchecked_entropy(p.marginal_x()); }
inline double entropy_y(const JointDist& p) { return detail::unchecked_entropy(p.marginal_y()); }

/// I(X;Y) = H(X) + H(Y) - H(X,Y), tiny negative roundoff clamped to zero.
inline double mutual_information(const JointDist& p) {
  const double i = entropy_x(p) + entropy_y(p) - joint_entropy(p);
  return std::max(i, 0.0);
}

/// H(X|Y) + H(Y|X) = 2H(X,Y) - H(X) - H(Y).
inline double conditional_entropy_sum(const JointDist& p) {
  return 2.0 * joint_entropy(p) - entropy_x(p) - entropy_y(p);
}

// ---------------------------------------------------------------------------
// Lower-set charts

enum class ChartVariant { BscKernel, SupportThree };

/// 2-parameter chart (f,g) -> P_XY onto a binary lower set, together with the
/// base point (f0,g0) that identifies Q_XY inside it.
struct ParamFamily {
  ChartVariant variant = ChartVariant::BscKernel;
  double epsilon = 0.0;  // BscKernel only
  double base_f = 0.5;
  double base_g = 0.5;

  static ParamFamily bsc_kernel(double eps, double f0 = 0.5, double g0 = 0.5) {
    detail::check_probability(eps, "epsilon");
    return {ChartVariant::BscKernel, eps, f0, g0};
  }
  static ParamFamily support_three(double f0, double g0) {
    return {ChartVariant::SupportThree, 0.0, f0, g0};
  }
  /// Same lower set with the roles of X and Y exchanged.
  [[nodiscard]] ParamFamily transposed() const { return {variant, epsilon, base_g, base_f}; }
};

using Cells2x2 = std::array<double, 4>;

namespace detail {

/// Unnormalized chart entries and normalizer, no validation.
inline std::pair<Cells2x2, double> chart_cells(const ParamFamily& fam, double f, double g) {
  const double fb = 1.0 - f, gb = 1.0 - g;
  if (fam.variant == ChartVariant::BscKernel) {
    const double e = fam.epsilon, eb = 1.0 - e;
    Cells2x2 c{eb * fb * gb, e * fb * g, e * f * gb, eb * f * g};
    return {c, c[0] + c[1] + c[2] + c[3]};
  }
  Cells2x2 c{0.0, fb * g, f * gb, f * g};
  return {c, f + fb * g};
}

}  // namespace detail

/// Normalizer of the chart: (f*g)*(1-eps) for BscKernel, f + (1-f)g for SupportThree.
inline double chart_normalizer(const ParamFamily& fam, double f, double g) {
  return detail::chart_cells(fam, f, g).second;
}

inline bool chart_singular(const ParamFamily& fam, double f, double g) {
  if (fam.variant == ChartVariant::SupportThree) return f == 0.0 && g == 0.0;
  return !(chart_normalizer(fam, f, g) > 0.0);
}

/// Normalized 2x2 cells of the chart point, throws SingularParameter on Z <= 0.
inline Cells2x2 param_to_cells(const ParamFamily& fam, double f, double g) {
  detail::check_probability(f, "chart parameter f");
  detail::check_probability(g, "chart parameter g");
  if (chart_singular(fam, f, g)) {
    throw SingularParameter("chart normalizer vanishes at (" + std::to_string(f) + ", " +
                            std::to_string(g) + ")");
  }
  auto [c, z] = detail::chart_cells(fam, f, g);
  for (double& v : c) v /= z;
  return c;
}

inline JointDist param_to_joint(const ParamFamily& fam, double f, double g) {
  const Cells2x2 c = param_to_cells(fam, f, g);
  return JointDist(2, 2, {c[0], c[1], c[2], c[3]});
}

/// Base distribution Q_XY of the family.
inline JointDist base_joint(const ParamFamily& fam) {
  return param_to_joint(fam, fam.base_f, fam.base_g);
}

/// Inverse chart. Throws NotInLowerSet when P is not in the family's image.
inline std::pair<double, double> joint_to_param(const ParamFamily& fam, const JointDist& p) {
  if (p.rows() != 2 || p.cols() != 2) throw NotInLowerSet("chart families are 2x2");
  double f = 0.0, g = 0.0;
  if (fam.variant == ChartVariant::BscKernel) {
    const double e = fam.epsilon, eb = 1.0 - e;
    if (e > 0.0 && eb > 0.0) {
      // M = P / kernel is the rank-one outer product (1-f, f) x (1-g, g) up to scale.
      const double m00 = p(0, 0) / eb, m01 = p(0, 1) / e, m10 = p(1, 0) / e, m11 = p(1, 1) / eb;
      const double total = m00 + m01 + m10 + m11;
      f = (m10 + m11) / total;
      g = (m01 + m11) / total;
    } else {
      // eps in {0,1}: the chart is not injective; pick the representative
      // with g = f (eps = 0) or g = 1 - f (eps = 1).
      const double on = (e == 0.0) ? p(1, 1) : p(1, 0);
      const double off = (e == 0.0) ? p(0, 0) : p(0, 1);
      const double r = std::sqrt(on), q = std::sqrt(off);
      f = r / (r + q);
      g = (e == 0.0) ? f : 1.0 - f;
    }
  } else {
    if (p(0, 0) > kProbTol) throw NotInLowerSet("support-three family requires P(0,0) = 0");
    const double a = p(0, 1), b = p(1, 0), c = p(1, 1);
    if (c > 0.0) {
      f = c / (a + c);
      g = c / (b + c);
    } else if (a > 0.0 && b == 0.0) {
      f = 0.0;
      g = 1.0;
    } else if (b > 0.0 && a == 0.0) {
      f = 1.0;
      g = 0.0;
    } else {
      throw NotInLowerSet("support-three family cannot mix (0,1) and (1,0) without (1,1)");
    }
  }
  f = std::clamp(f, 0.0, 1.0);
  g = std::clamp(g, 0.0, 1.0);
  if (chart_singular(fam, f, g)) throw NotInLowerSet("distribution maps to a singular chart point");
  const Cells2x2 back = param_to_cells(fam, f, g);
  for (std::size_t k = 0; k < 4; ++k) {
    if (std::abs(back[k] - p.entries()[k]) > kProbTol) {
      throw NotInLowerSet("distribution is not factorizable over the chart family");
    }
  }
  return {f, g};
}

// ---------------------------------------------------------------------------
// Bipartite support graph

struct Components {
  /// Component id of each x (rows) and y (columns); -1 for zero-mass vertices.
  std::vector<int> row_component;
  std::vector<int> col_component;
  int count = 0;
  [[nodiscard]] bool is_indecomposable() const { return count == 1; }
};

/// Connected components of the graph whose edges are the positive entries.
/// Vertices carrying zero marginal mass are left out (component -1).
inline Components connected_components(const JointDist& p) {
  const std::size_t m = p.rows(), n = p.cols();
  std::vector<std::size_t> parent(m + n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<bool> alive(m + n, false);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (p(x, y) > 0.0) {
        alive[x] = alive[m + y] = true;
        parent[find(x)] = find(m + y);
      }
    }
  }
  Components out;
  out.row_component.assign(m, -1);
  out.col_component.assign(n, -1);
  std::vector<int> label(m + n, -1);
  for (std::size_t v = 0; v < m + n; ++v) {
    if (!alive[v]) continue;
    const std::size_t r = find(v);
    if (label[r] < 0) label[r] = out.count++;
    (v < m ? out.row_component[v] : out.col_component[v - m]) = label[r];
  }
  return out;
}

// ---------------------------------------------------------------------------
// XY-absolute continuity

/// d nu / d mu = fvec(x) * gvec(y) on supp(mu).
struct FactorPair {
  std::vector<double> fvec;
  std::vector<double> gvec;
};

/// Finds the factorization of d nu / d mu, normalized so the first row with a
/// nonzero factor in each connected piece has fvec = 1. Returns nullopt when
/// the density ratio is not rank-one per component within 1e-9 (relative).
inline std::optional<FactorPair> check_xy_abs_continuity(const JointDist& nu, const JointDist& mu) {
  if (nu.rows() != mu.rows() || nu.cols() != mu.cols()) {
    throw NotAbsolutelyContinuous("alphabet sizes differ");
  }
  const std::size_t m = mu.rows(), n = mu.cols();
  std::vector<double> ratio(m * n, 0.0);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (mu(x, y) > 0.0) {
        ratio[x * n + y] = nu(x, y) / mu(x, y);
      } else if (nu(x, y) > 0.0) {
        throw NotAbsolutelyContinuous("supp(nu) is not contained in supp(mu)");
      }
    }
  }
  auto r = [&](std::size_t x, std::size_t y) { return ratio[x * n + y]; };
  auto on_support = [&](std::size_t x, std::size_t y) { return mu(x, y) > 0.0; };
  const double scale = std::max(1.0, *std::max_element(ratio.begin(), ratio.end()));
  const double tol = kProbTol * scale;

  // Rows/columns whose ratio vanishes on the whole support get a zero factor;
  // the remaining entries are propagated by breadth-first search.
  FactorPair out{std::vector<double>(m, 0.0), std::vector<double>(n, 0.0)};
  std::vector<bool> row_active(m, false), col_active(n, false);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (on_support(x, y) && r(x, y) > tol) row_active[x] = col_active[y] = true;

  std::vector<bool> row_done(m, false), col_done(n, false);
  for (std::size_t root = 0; root < m; ++root) {
    if (!row_active[root] || row_done[root]) continue;
    out.fvec[root] = 1.0;
    row_done[root] = true;
    std::vector<std::pair<bool, std::size_t>> queue{{true, root}};
    while (!queue.empty()) {
      auto [is_row, v] = queue.back();
      queue.pop_back();
      if (is_row) {
        for (std::size_t y = 0; y < n; ++y) {
          if (col_done[y] || !on_support(v, y) || r(v, y) <= tol) continue;
          out.gvec[y] = r(v, y) / out.fvec[v];
          col_done[y] = true;
          queue.push_back({false, y});
        }
      } else {
        for (std::size_t x = 0; x < m; ++x) {
          if (row_done[x] || !on_support(x, v) || r(x, v) <= tol) continue;
          out.fvec[x] = r(x, v) / out.gvec[v];
          row_done[x] = true;
          queue.push_back({true, x});
        }
      }
    }
  }
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (!on_support(x, y)) continue;
      if (std::abs(out.fvec[x] * out.gvec[y] - r(x, y)) > tol) return std::nullopt;
    }
  }
  return out;
}

}  // namespace ikg
