#pragma once

// Maximal correlation via the normalized joint matrix
//   A(x,y) = P(x,y) / sqrt(P_X(x) P_Y(y)),
// its supremum over a lower set, and the stationarity conditions satisfied by a
// supremizing distribution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ikg/core.hpp"
#include "ikg/error.hpp"
#include "ikg/svd.hpp"

namespace ikg {

/// Drops rows and columns with zero marginal mass.
inline JointDist restrict_to_support(const JointDist& p) {
  const auto px = p.marginal_x();
  const auto py = p.marginal_y();
  std::vector<std::size_t> rows, cols;
  for (std::size_t x = 0; x < px.size(); ++x)
    if (px[x] > 0.0) rows.push_back(x);
  for (std::size_t y = 0; y < py.size(); ++y)
    if (py[y] > 0.0) cols.push_back(y);
  std::vector<double> e;
  e.reserve(rows.size() * cols.size());
  for (std::size_t x : rows)
    for (std::size_t y : cols) e.push_back(p(x, y));
  return JointDist(rows.size(), cols.size(), std::move(e));
}

/// Throws DegenerateDistribution if a marginal has a zero entry.
inline DenseMatrix correlation_matrix(const JointDist& p) {
  const auto px = p.marginal_x();
  const auto py = p.marginal_y();
  for (double v : px)
    if (!(v > 0.0)) throw DegenerateDistribution("X-marginal has a zero entry");
  for (double v : py)
    if (!(v > 0.0)) throw DegenerateDistribution("Y-marginal has a zero entry");
  DenseMatrix a(p.rows(), p.cols());
  for (std::size_t x = 0; x < p.rows(); ++x)
    for (std::size_t y = 0; y < p.cols(); ++y) a(x, y) = p(x, y) / std::sqrt(px[x] * py[y]);
  return a;
}

/// Singular values of A and the singular pair belonging to the second one.
struct SingularData {
  std::vector<double> singular_values;  // descending
  std::vector<double> u;                // left vector for sigma_2, unit norm
  std::vector<double> v;                // right vector for sigma_2, unit norm
  /// sigma_2 separated from sigma_1 and sigma_3 (taken as 0 if absent) by more than 1e-9.
  bool simple = true;
};

/// Requires strictly positive marginals; use restrict_to_support first otherwise.
inline SingularData singular_data(const JointDist& p) {
  const DenseMatrix a = correlation_matrix(p);
  SingularData out;
  if (a.rows == 2 && a.cols == 2) {
    // sigma_1 = 1 with vectors sqrt(P_X), sqrt(P_Y); sigma_2 = |det A|.
    const auto px = p.marginal_x();
    const auto py = p.marginal_y();
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    out.singular_values = {1.0, std::abs(det)};
    out.u = {-std::sqrt(px[1]), std::sqrt(px[0])};
    out.v = {-std::sqrt(py[1]), std::sqrt(py[0])};
    if (det < 0.0) {
      for (double& x : out.v) x = -x;
    }
  } else {
    const SvdResult svd = jacobi_svd(a);
    out.singular_values = svd.singular_values;
    if (out.singular_values.size() >= 2) {
      out.u.resize(a.rows);
      out.v.resize(a.cols);
      for (std::size_t i = 0; i < a.rows; ++i) out.u[i] = svd.u(i, 1);
      for (std::size_t j = 0; j < a.cols; ++j) out.v[j] = svd.v(j, 1);
    }
  }
  const auto& s = out.singular_values;
  if (s.size() < 2) {
    out.simple = false;
  } else {
    const double s3 = s.size() >= 3 ? s[2] : 0.0;
    out.simple = (s[0] - s[1] > 1e-9) && (s[1] - s3 > 1e-9);
  }
  return out;
}

/// Second singular value of A after restriction to the marginal supports;
/// zero when the effective alphabet of either side is a single letter.
inline double maximal_correlation(const JointDist& joint) {
  const JointDist p = restrict_to_support(joint);
  if (p.rows() < 2 || p.cols() < 2) return 0.0;
  const auto sv = singular_data(p).singular_values;
  return std::clamp(sv[1], 0.0, 1.0);
}

/// Admissible (s, p) region of the lower set of BSS(eps), within 1e-12.
inline bool bss_sp_admissible(double eps, double s, double p) {
  constexpr double tol = 1e-12;
  if (s < -tol || p < -tol) return false;
  if (eps > 0.0 && s > 1.0 / eps + tol) return false;
  const double eb = 1.0 - eps;
  const double lim_a = eb > 0.0 ? (1.0 - eps * s) / eb : 0.0;
  const double bound = 0.25 * std::min(lim_a * lim_a, s * s);
  return p <= bound + tol * std::max(1.0, bound);
}

/// rho_m^2 of a member of the lower set of BSS(eps) in terms of the sum s and
/// product p of the off-diagonal factors of P / [[1-eps, eps], [eps, 1-eps]].
inline double rho_m_bss_closed_form(double eps, double s, double p) {
  detail::check_probability(eps, "epsilon");
  if (!bss_sp_admissible(eps, s, p)) throw DomainError("inadmissible (s, p) for the lower set");
  const double w = 1.0 - 2.0 * eps;
  const double num = w * w * p;
  const double den = num + eps * w * s + eps * eps;
  if (num == 0.0) return 0.0;
  return num / den;
}

/// Reads (s, p) = (beta + gamma, beta * gamma) from the Hadamard factor M of a
/// distribution in the lower set of BSS(eps), eps in (0,1).
inline std::pair<double, double> bss_sp_from_joint(double eps, const JointDist& p) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (p.rows() != 2 || p.cols() != 2) throw DomainError("expected a 2x2 distribution");
  const double gamma = p(0, 1) / eps;
  const double beta = p(1, 0) / eps;
  return {beta + gamma, beta * gamma};
}

struct LowerSetSupremum {
  double value = 0.0;  // sup of rho_m^2
  double f = 0.0;
  double g = 0.0;
};

/// Grid maximum of rho_m^2 over the chart, nodes i/(grid_n-1); singular cells skipped.
inline LowerSetSupremum sup_rho_m_over_lower_set(const ParamFamily& fam, int grid_n) {
  if (grid_n < 3) throw DomainError("grid_n must be at least 3");
  LowerSetSupremum best{-1.0, 0.0, 0.0};
  for (int i = 0; i < grid_n; ++i) {
    const double f = static_cast<double>(i) / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double g = static_cast<double>(j) / (grid_n - 1);
      if (chart_singular(fam, f, g)) continue;
      const double rho = maximal_correlation(param_to_joint(fam, f, g));
      if (rho * rho > best.value) best = {rho * rho, f, g};
    }
  }
  return best;
}

/// Sup-norm residuals of the first-order conditions at a supremizer:
///   u^2 = Q_{X|Y} v^2,  v^2 = Q_{Y|X} u^2,  u^2 = Q_X,  v^2 = Q_Y.
struct StationarityResiduals {
  double conditional_x = 0.0;  // ||u^2 - Q_{X|Y} v^2||_inf
  double conditional_y = 0.0;  // ||v^2 - Q_{Y|X} u^2||_inf
  double marginal_x = 0.0;     // ||u^2 - Q_X||_inf
  double marginal_y = 0.0;     // ||v^2 - Q_Y||_inf
  double sigma2 = 0.0;
  /// False when sigma_2 is repeated; residuals then refer to one basis vector.
  bool simple = true;

  [[nodiscard]] double max() const {
    return std::max({conditional_x, conditional_y, marginal_x, marginal_y});
  }
};

inline StationarityResiduals stationarity_residuals(const JointDist& joint) {
  const JointDist p = restrict_to_support(joint);
  StationarityResiduals out;
  if (p.rows() < 2 || p.cols() < 2) {
    out.simple = false;
    return out;
  }
  const SingularData sd = singular_data(p);
  out.sigma2 = sd.singular_values[1];
  out.simple = sd.simple;
  const auto px = p.marginal_x();
  const auto py = p.marginal_y();
  const std::size_t m = p.rows(), n = p.cols();
  for (std::size_t x = 0; x < m; ++x) {
    double mix = 0.0;
    for (std::size_t y = 0; y < n; ++y) mix += p(x, y) / py[y] * sd.v[y] * sd.v[y];
    const double u2 = sd.u[x] * sd.u[x];
    out.conditional_x = std::max(out.conditional_x, std::abs(u2 - mix));
    out.marginal_x = std::max(out.marginal_x, std::abs(u2 - px[x]));
  }
  for (std::size_t y = 0; y < n; ++y) {
    double mix = 0.0;
    for (std::size_t x = 0; x < m; ++x) mix += p(x, y) / px[x] * sd.u[x] * sd.u[x];
    const double v2 = sd.v[y] * sd.v[y];
    out.conditional_y = std::max(out.conditional_y, std::abs(v2 - mix));
    out.marginal_y = std::max(out.marginal_y, std::abs(v2 - py[y]));
  }
  return out;
}

}  // namespace ikg
