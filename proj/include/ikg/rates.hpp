#pragma once

// Supporting-line data phi_r(s) of the r-round key/communication region, the
// boundary it determines, SDPC/SSDPC thresholds, KBIB, MIMK and the
// finite-blocklength converse bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ikg/core.hpp"
#include "ikg/envelope.hpp"
#include "ikg/error.hpp"
#include "ikg/hull.hpp"
#include "ikg/parallel.hpp"

namespace ikg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Entropies of the base distribution Q, computed exactly (never from the grid).
struct BaseQuantities {
  double joint_entropy = 0.0;
  double mutual_information = 0.0;
  double conditional_sum = 0.0;  // H(X|Y) + H(Y|X)

  static BaseQuantities of(const JointDist& q) {
    return {ikg::joint_entropy(q), ikg::mutual_information(q), ikg::conditional_entropy_sum(q)};
  }
};

struct SupportValue {
  double s = 0.0;
  double phi = 0.0;
  int passes = 0;
  bool converged = true;
  double last_delta = 0.0;
};

/// phi_r(s) = omega_r^s(Q) - s H(X,Y) + I(X;Y), s >= 0.
inline SupportValue support_value(const ChartGridPtr& grid, Rounds r, double s, const EnvelopeConfig& cfg) {
  if (!(s >= 0.0)) throw DomainError("s must be nonnegative");
  const auto base = BaseQuantities::of(base_joint(grid->family()));
  std::vector<ExtReal> v(grid->cell_count(), kNegInf);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!grid->singular(k)) v[k] = s * grid->joint_entropy_at(k) - grid->mutual_information_at(k);
  const EnvelopeResult env = apply_rounds(GridFunctional(grid, std::move(v)), r, cfg);
  const double omega0_q = s * base.joint_entropy - base.mutual_information;
  return {s, *env.fn.at_base() - omega0_q, env.passes, env.converged, env.last_delta};
}

inline SupportValue support_value(const ParamFamily& fam, Rounds r, double s, const EnvelopeConfig& cfg) {
  cfg.validate();
  return support_value(ChartGrid::uniform(fam, cfg.grid_n), r, s, cfg);
}

/// n slopes spaced geometrically over [lo, hi], ascending.
inline std::vector<double> geometric_slopes(double lo = 1e-3, double hi = 1.0, int n = 60) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw DomainError("invalid slope range");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  out.back() = hi;
  return out;
}

/// Geometric slopes plus `dense` evenly spaced slopes on [s_star/2, s_star],
/// where the boundary bends most.
inline std::vector<double> region_slopes(double s_star, int dense = 40) {
  std::vector<double> out = geometric_slopes();
  if (s_star > 2e-3 && dense > 1) {
    for (int k = 0; k < dense; ++k) out.push_back(s_star * (0.5 + 0.5 * k / (dense - 1)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            out.end());
  return out;
}

struct BoundaryPoint {
  double S = 0.0;
  double R = 0.0;
  double s = 0.0;  // slope of the active supporting line; 0 where R = I(X;Y) binds
};

struct RateRegionBoundary {
  Rounds r_rounds = 1;
  std::vector<BoundaryPoint> points;
  std::vector<SupportValue> lines;  // (s, phi_r(s)) per slope
  double mutual_information = 0.0;
  double max_line_disagreement = 0.0;
  bool converged = true;
  std::vector<std::string> warnings;
};

/// R*(S) = min(I(X;Y), min_s {phi_r(s) + s S}) over the given slopes.
/// An empty S grid defaults to 101 points over [0, H(X,Y)].
inline RateRegionBoundary rate_region_boundary(const ChartGridPtr& grid, Rounds r, std::vector<double> slopes,
                                               std::vector<double> s_values, const EnvelopeConfig& cfg) {
  if (slopes.empty()) throw DomainError("empty slope grid");
  for (std::size_t k = 0; k < slopes.size(); ++k) {
    if (!(slopes[k] > 0.0)) throw DomainError("slopes must be positive");
    if (k > 0 && !(slopes[k] > slopes[k - 1])) throw DomainError("slopes must be sorted ascending");
  }
  const auto base = BaseQuantities::of(base_joint(grid->family()));
  if (s_values.empty()) {
    for (int k = 0; k <= 100; ++k) s_values.push_back(base.joint_entropy * k / 100.0);
  }

  RateRegionBoundary out;
  out.r_rounds = r;
  out.mutual_information = base.mutual_information;
  out.lines.resize(slopes.size());
  EnvelopeConfig inner = cfg;
  const unsigned threads = resolve_threads(cfg.threads);
  inner.threads = 1;
  parallel_for(slopes.size(), threads,
               [&](std::size_t k) { out.lines[k] = support_value(grid, r, slopes[k], inner); });
  for (const auto& l : out.lines) {
    if (!l.converged) out.converged = false;
  }
  if (!out.converged) out.warnings.push_back("envelope did not converge for some slopes");

  for (double S : s_values) {
    BoundaryPoint p{S, base.mutual_information, 0.0};
    std::size_t active = slopes.size();
    for (std::size_t k = 0; k < slopes.size(); ++k) {
      const double val = out.lines[k].phi + slopes[k] * S;
      if (val < p.R) {
        p.R = val;
        p.s = slopes[k];
        active = k;
      }
    }
    if (active < slopes.size()) {
      // disagreement with the nearer of the two neighboring lines
      double d = kInfinity;
      for (std::size_t nb : {active - 1, active + 1}) {
        if (nb >= slopes.size()) continue;
        d = std::min(d, out.lines[nb].phi + slopes[nb] * S - p.R);
      }
      if (std::isfinite(d)) out.max_line_disagreement = std::max(out.max_line_disagreement, d);
    }
    out.points.push_back(p);
  }
  if (out.max_line_disagreement > 1e-3) {
    out.warnings.push_back("slope grid too coarse: adjacent supporting lines differ by " +
                           std::to_string(out.max_line_disagreement));
  }
  return out;
}

struct ThresholdResult {
  double s_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  bool converged = true;  // every envelope run converged
};

namespace detail {

template <class Phi>
ThresholdResult bisect_threshold(Phi&& phi, double zero_tol, double bisect_tol) {
  if (!(bisect_tol >= 1e-6)) throw DomainError("bisection tolerance must be at least 1e-6");
  ThresholdResult res;
  bool ok = true;
  auto eval = [&](double s) {
    const SupportValue v = phi(s);
    ok = ok && v.converged;
    return v.phi;
  };
  if (eval(1.0) > zero_tol) throw InconsistencyError("phi(1) is positive: no scheme can have R > S");
  if (eval(0.0) <= zero_tol) {
    res = {0.0, 0.0, 0.0, 0, ok};
    return res;
  }
  double lo = 0.0, hi = 1.0;
  int it = 0;
  while (hi - lo > bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    (eval(mid) > zero_tol ? lo : hi) = mid;
    ++it;
  }
  return {0.5 * (lo + hi), lo, hi, it, ok};
}

}  // namespace detail

/// Threshold slope where phi_r drops to the envelope noise floor
/// (3 x sup_norm_tol): s_1^* for r = 1, s_infinity^* for r = INF.
inline ThresholdResult s_star(const ChartGridPtr& grid, Rounds r, const EnvelopeConfig& cfg,
                              double bisect_tol = 1e-5) {
  return detail::bisect_threshold([&](double s) { return support_value(grid, r, s, cfg); }, 3.0 * cfg.sup_norm_tol,
                                  bisect_tol);
}

inline ThresholdResult s_star(const ParamFamily& fam, Rounds r, const EnvelopeConfig& cfg,
                              double bisect_tol = 1e-5) {
  cfg.validate();
  return s_star(ChartGrid::uniform(fam, cfg.grid_n), r, cfg, bisect_tol);
}

/// One-way phi_1(s) for a source with binary X and arbitrary Y: concave
/// envelope of omega_0^s along P_X with the channel P_{Y|X} of Q held fixed.
inline SupportValue one_way_support_value(const JointDist& q, double s, int grid_n) {
  if (q.rows() != 2) throw DomainError("one-way fiber envelope needs a binary X");
  if (!(s >= 0.0)) throw DomainError("s must be nonnegative");
  if (grid_n < 3) throw DomainError("grid_n must be at least 3");
  const auto px = q.marginal_x();
  if (!(px[0] > 0.0 && px[1] > 0.0)) throw DegenerateDistribution("X-marginal has a zero entry");
  const std::size_t n = q.cols();
  std::vector<double> w0(n), w1(n);
  for (std::size_t y = 0; y < n; ++y) {
    w0[y] = q(0, y) / px[0];
    w1[y] = q(1, y) / px[1];
  }
  auto omega0 = [&](double t) {
    std::vector<double> e(2 * n);
    for (std::size_t y = 0; y < n; ++y) {
      e[y] = (1.0 - t) * w0[y];
      e[n + y] = t * w1[y];
    }
    const JointDist p(2, n, std::move(e));
    return s * joint_entropy(p) - mutual_information(p);
  };
  std::vector<double> t;
  for (int k = 0; k < grid_n; ++k) t.push_back(static_cast<double>(k) / (grid_n - 1));
  const auto it = std::lower_bound(t.begin(), t.end(), px[1]);
  std::size_t qi = static_cast<std::size_t>(it - t.begin());
  if (it == t.end() || *it != px[1]) t.insert(it, px[1]);
  std::vector<ExtReal> v;
  for (double x : t) v.emplace_back(omega0(x));
  const auto env = upper_concave_hull_1d(t, v);
  return {s, *env[qi] - *v[qi], 1, true, 0.0};
}

inline ThresholdResult s_star_one_way_binary_x(const JointDist& q, int grid_n = 2001, double zero_tol = 3e-8,
                                               double bisect_tol = 1e-5) {
  return detail::bisect_threshold([&](double s) { return one_way_support_value(q, s, grid_n); }, zero_tol,
                                  bisect_tol);
}

struct KbibResult {
  double gamma = 0.0;
  bool infinite = false;
  ThresholdResult threshold;
};

/// Gamma_r = s^*/(1 - s^*); infinite when s^* is within two bisection steps of 1.
inline KbibResult kbib(const ChartGridPtr& grid, Rounds r, const EnvelopeConfig& cfg, double bisect_tol = 1e-5) {
  KbibResult out;
  out.threshold = s_star(grid, r, cfg, bisect_tol);
  const double s = out.threshold.s_star;
  if (s > 1.0 - 2.0 * bisect_tol) {
    out.infinite = true;
    out.gamma = kInfinity;
  } else {
    out.gamma = s / (1.0 - s);
  }
  return out;
}

inline KbibResult kbib(const ParamFamily& fam, Rounds r, const EnvelopeConfig& cfg, double bisect_tol = 1e-5) {
  cfg.validate();
  return kbib(ChartGrid::uniform(fam, cfg.grid_n), r, cfg, bisect_tol);
}

/// rho^2 / (1 - rho^2) for jointly Gaussian sources with correlation rho.
inline double gaussian_kbib(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw DomainError("correlation must lie in [-1,1]");
  const double r2 = rho * rho;
  return r2 >= 1.0 ? kInfinity : r2 / (1.0 - r2);
}

struct MimkResult {
  double value = 0.0;
  double sigma = 0.0;
  int passes = 0;
  bool converged = true;
};

/// I_r(Q) = H(X|Y) + H(Y|X) - sigma_r(Q).
inline MimkResult mimk_sigma_route(const ChartGridPtr& grid, Rounds r, const EnvelopeConfig& cfg) {
  if (r == 0) throw DomainError("MIMK needs at least one round");
  const auto base = BaseQuantities::of(base_joint(grid->family()));
  const EnvelopeResult env = sigma_r(grid, r, cfg);
  const ExtReal& sig = env.fn.at_base();
  if (!sig) throw InconsistencyError("sigma_r is -infinity at the base point");
  return {base.conditional_sum - *sig, *sig, env.passes, env.converged};
}

inline MimkResult mimk_sigma_route(const ParamFamily& fam, Rounds r, const EnvelopeConfig& cfg) {
  cfg.validate();
  return mimk_sigma_route(ChartGrid::uniform(fam, cfg.grid_n), r, cfg);
}

struct LimitRouteResult {
  double value = 0.0;  // extrapolated to s = 0
  std::vector<double> s_seq;
  std::vector<double> estimates;  // H(X|Y) + H(Y|X) - omega_r^s(Q) / s
  bool monotone_tail = true;
  bool converged = true;
  std::vector<std::string> warnings;
};

inline std::vector<double> default_limit_sequence() { return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}; }

/// I_r(Q) as the s -> 0 limit of H(X|Y) + H(Y|X) - omega_r^s(Q)/s, extrapolated
/// by the quadratic through the last three points of the sequence.
inline LimitRouteResult mimk_limit_route(const ChartGridPtr& grid, Rounds r, const std::vector<double>& s_seq,
                                         const EnvelopeConfig& cfg) {
  if (r == 0) throw DomainError("MIMK needs at least one round");
  if (s_seq.size() < 3) throw DomainError("need at least three values of s");
  for (std::size_t k = 0; k < s_seq.size(); ++k) {
    if (!(s_seq[k] > 0.0)) throw DomainError("s values must be positive");
    if (k > 0 && !(s_seq[k] < s_seq[k - 1])) throw DomainError("s values must decrease");
  }
  const auto base = BaseQuantities::of(base_joint(grid->family()));
  LimitRouteResult out;
  out.s_seq = s_seq;
  for (double s : s_seq) {
    const EnvelopeResult env = omega_r(s, grid, r, cfg);
    out.converged = out.converged && env.converged;
    out.estimates.push_back(base.conditional_sum - *env.fn.at_base() / s);
  }
  const std::size_t n = s_seq.size();
  const double x0 = s_seq[n - 3], x1 = s_seq[n - 2], x2 = s_seq[n - 1];
  const double y0 = out.estimates[n - 3], y1 = out.estimates[n - 2], y2 = out.estimates[n - 1];
  // Lagrange interpolant at s = 0
  out.value = y0 * (x1 * x2) / ((x0 - x1) * (x0 - x2)) + y1 * (x0 * x2) / ((x1 - x0) * (x1 - x2)) +
              y2 * (x0 * x1) / ((x2 - x0) * (x2 - x1));
  const double d1 = y1 - y0, d2 = y2 - y1;
  out.monotone_tail = d1 * d2 >= 0.0 || std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12;
  if (!out.monotone_tail) out.warnings.push_back("non-monotone tail in the s -> 0 sequence");
  if (!out.converged) out.warnings.push_back("envelope did not converge for some s");
  return out;
}

struct OneWayReport {
  double sigma1 = 0.0;
  double sigma3 = 0.0;
  double sigma_inf = 0.0;
  double sigma1_transposed = 0.0;
  double conditional_sum = 0.0;
  double one_way_gap = 0.0;  // min over orientations of (Hc - sigma_1) minus (Hc - sigma_inf)
  bool one_way_optimal = false;
  bool converged = true;
};

/// Whether one-way communication already attains the interactive MIMK.
inline OneWayReport one_way_check(const ParamFamily& fam, const EnvelopeConfig& cfg, double grid_tol = 1e-6) {
  cfg.validate();
  const auto grid = ChartGrid::uniform(fam, cfg.grid_n);
  const auto grid_t = ChartGrid::uniform(fam.transposed(), cfg.grid_n);
  const auto base = BaseQuantities::of(base_joint(fam));
  auto at_q = [](const EnvelopeResult& e) {
    if (!e.fn.at_base()) throw InconsistencyError("sigma_r is -infinity at the base point");
    return *e.fn.at_base();
  };
  OneWayReport rep;
  rep.conditional_sum = base.conditional_sum;
  rep.sigma1 = at_q(sigma_r(grid, 1, cfg));
  rep.sigma3 = at_q(sigma_r(grid, 3, cfg));
  const EnvelopeResult inf = sigma_r(grid, kInfiniteRounds, cfg);
  rep.sigma_inf = at_q(inf);
  rep.converged = inf.converged;
  rep.sigma1_transposed = at_q(sigma_r(grid_t, 1, cfg));
  const double best_one_way = std::min(base.conditional_sum - rep.sigma1, base.conditional_sum - rep.sigma1_transposed);
  rep.one_way_gap = best_one_way - (base.conditional_sum - rep.sigma_inf);
  rep.one_way_optimal = rep.one_way_gap <= 2.0 * grid_tol;
  return rep;
}

struct ConverseBound {
  double ratio_bound = 0.0;  // upper bound on log|K| / log|W^r|
  double key_bound = 0.0;    // ratio_bound * log|W^r|
  bool infinite = false;
};

/// Blocklength-free bound on key bits per communication bit for error delta,
/// where s is the sup of R/S over the r-round region. All logs in nats.
inline ConverseBound converse_bound(double log_k, double log_w, double delta, double s) {
  if (!(log_k > 0.0)) throw DomainError("log|K| must be positive");
  if (!(log_w > 0.0)) throw DomainError("log|W| must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0,1)");
  const double sb = 1.0 - s;
  const double factor = 1.0 - (7.0 - 5.0 * s) / sb * delta -
                        (2.0 * delta * std::log(1.0 / (2.0 * delta)) + (1.0 + s) / sb * kLn2) / log_k;
  if (!(factor > 0.0)) return {kInfinity, kInfinity, true};
  const double ratio = s / sb / factor;
  return {ratio, ratio * log_w, false};
}

}  // namespace ikg
