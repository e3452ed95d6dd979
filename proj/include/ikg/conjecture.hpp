#pragma once

// Grid verification of the four-parameter inequality
//   s H(X,Y) - I(X;Y) <= A + c (f - 1/2)(g - 1/2) / Z
// on the BSC-kernel chart, whose right side is the XY-linear functional chi
// that touches omega_0^s at (a,1/2), (1-a,1/2), (1/2,a), (1/2,1-a); and of the
// reduced inequality governing the regime eps -> 1/2.
//
// Internally alpha and eps enter through D = 2 alpha - 1 and w = 1 - 2 eps, so
// that alpha*eps = (1 + D w)/2 and log(alpha/(1-alpha)) = 2 atanh(D).

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ikg/core.hpp"
#include "ikg/error.hpp"
#include "ikg/parallel.hpp"

namespace ikg {

namespace detail {

inline void check_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError(std::string(what) + " must lie in (0,1), got " + std::to_string(x));
}

// atanh(D w) / D, with limit w at D = 0.
inline double atanh_ratio_d(double d, double w) { return d == 0.0 ? w : std::atanh(d * w) / d; }

// atanh(D w) / atanh(D), with limit w at D = 0.
inline double atanh_ratio(double d, double w) { return d == 0.0 ? w : std::atanh(d * w) / std::atanh(d); }

// atanh(D) / D, with limit 1 at D = 0.
inline double atanh_over_d(double d) { return d == 0.0 ? 1.0 : std::atanh(d) / d; }

}  // namespace detail

/// Slope at which alpha is the optimal symmetric test-channel parameter.
inline double touch_slope(double alpha, double eps) {
  detail::check_open_unit(alpha, "alpha");
  detail::check_open_unit(eps, "epsilon");
  const double d = 2.0 * alpha - 1.0, w = 1.0 - 2.0 * eps;
  return w * detail::atanh_ratio(d, w);
}

struct CForms {
  double first = 0.0;
  double second = 0.0;
  double scale = 0.0;  // largest term magnitude across both forms
};

/// Both closed forms of the coefficient c.
inline CForms chi_c_forms(double alpha, double eps) {
  detail::check_open_unit(alpha, "alpha");
  detail::check_open_unit(eps, "epsilon");
  const double d = 2.0 * alpha - 1.0, w = 1.0 - 2.0 * eps;
  const double ee = eps * (1.0 - eps);                 // (1 - w^2)/4
  const double aa = alpha * (1.0 - alpha);             // (1 - D^2)/4
  const double conv = 0.25 * (1.0 - d * d * w * w);    // (alpha*eps)(alpha-bar*eps)
  const double big_l = std::log((1.0 - eps) / eps);    // 2 atanh(w)
  const double k = touch_slope(alpha, eps);

  const std::array<double, 3> t1{-8.0 * k * aa * w * detail::atanh_over_d(d), -4.0 * (k + 1.0) * ee * big_l,
                                 8.0 * conv * detail::atanh_ratio_d(d, w)};
  const std::array<double, 3> t2{8.0 * ee * detail::atanh_ratio_d(d, w),
                                 -4.0 * ee * w * big_l * detail::atanh_ratio(d, w), -4.0 * ee * big_l};
  CForms out;
  for (double t : t1) {
    out.first += t;
    out.scale = std::max(out.scale, std::abs(t));
  }
  for (double t : t2) {
    out.second += t;
    out.scale = std::max(out.scale, std::abs(t));
  }
  return out;
}

/// c from the second form, after checking both forms agree to 1e-9 relative
/// to their largest term. Throws TranscriptionError otherwise.
inline double chi_c(double alpha, double eps) {
  const CForms c = chi_c_forms(alpha, eps);
  if (std::abs(c.first - c.second) > 1e-9 * std::max(c.scale, 1e-300)) {
    throw TranscriptionError("closed forms of c disagree: " + std::to_string(c.first) + " vs " +
                             std::to_string(c.second));
  }
  return c.second;
}

/// A = s [h(eps) + h(alpha)] - [h(alpha*eps) - h(eps)].
inline double chi_a(double alpha, double eps) {
  const double s = touch_slope(alpha, eps);
  const double he = binary_entropy(eps);
  return s * (he + binary_entropy(alpha)) - (binary_entropy(binary_convolution(alpha, eps)) - he);
}

struct ChiCoefficients {
  double alpha = 0.0;
  double eps = 0.0;
  double s = 0.0;
  double c = 0.0;
  double a = 0.0;

  static ChiCoefficients of(double alpha, double eps) {
    return {alpha, eps, touch_slope(alpha, eps), chi_c(alpha, eps), chi_a(alpha, eps)};
  }
};

/// chi(f,g) = A + c (f - 1/2)(g - 1/2) / Z.
inline double chi_value(double f, double g, const ChiCoefficients& k) {
  const double z = chart_normalizer(ParamFamily::bsc_kernel(k.eps), f, g);
  if (!(z > 0.0)) throw SingularParameter("chart normalizer vanishes");
  return k.a + k.c * (f - 0.5) * (g - 0.5) / z;
}

/// chi - (s H - I) at the chart point (f,g) of BSC(eps).
inline double chi_gap(double f, double g, double alpha, double eps) {
  detail::check_open_unit(f, "f");
  detail::check_open_unit(g, "g");
  const auto k = ChiCoefficients::of(alpha, eps);
  const JointDist p = param_to_joint(ParamFamily::bsc_kernel(eps), f, g);
  return chi_value(f, g, k) - (k.s * joint_entropy(p) - mutual_information(p));
}

namespace detail {

struct GapTerms {
  double gap;
  double magnitude;  // sum of absolute values of the summed terms
};

// Gap written as A + c(f-1/2)(g-1/2)/Z + H(X) + H(Y) - (s+1) H(X,Y), every sum
// taken in sorted order with compensation so it is invariant under the
// symmetries (f,g) -> (g,f) and (f,g) -> (1-f,1-g) up to the cell products.
inline GapTerms gap_kernel(double f, double g, const ChiCoefficients& k) {
  const double e = k.eps, eb = 1.0 - k.eps, fb = 1.0 - f, gb = 1.0 - g;
  std::array<double, 4> cell{eb * fb * gb, e * fb * g, e * f * gb, eb * f * g};
  std::array<double, 4> sorted = cell;
  std::sort(sorted.begin(), sorted.end());
  CompensatedSum zs;
  for (double v : sorted) zs.add(v);
  const double z = zs.value();
  CompensatedSum hs;
  for (double& v : sorted) hs.add(-xlogx(v / z));
  const double hxy = hs.value();
  const double px1 = (cell[2] + cell[3]) / z, py1 = (cell[1] + cell[3]) / z;
  auto h2 = [](double p) {
    const double lo = std::min(p, 1.0 - p), hi = std::max(p, 1.0 - p);
    return -xlogx(lo) - xlogx(hi);
  };
  const double hx = h2(px1), hy = h2(py1);
  const double lin = k.c * (f - 0.5) * (g - 0.5) / z;
  std::array<double, 5> terms{k.a, lin, std::min(hx, hy), std::max(hx, hy), -(k.s + 1.0) * hxy};
  CompensatedSum total;
  double mag = 0.0;
  for (double t : terms) {
    total.add(t);
    mag += std::abs(t);
  }
  return {total.value(), mag};
}

}  // namespace detail

/// Offset axis lo + step/3, lo + 4 step/3, ... up to hi - step/3; a single
/// value when lo == hi.
struct AxisRange {
  double lo = 0.0;
  double hi = 0.5;

  [[nodiscard]] std::vector<double> values(double step) const {
    if (lo == hi) return {lo};
    if (!(hi > lo)) throw DomainError("axis range must satisfy lo <= hi");
    const double first = lo + step / 3.0, last = hi - step / 3.0;
    std::vector<double> out;
    if (last < first) return out;
    const auto n = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < n; ++k) out.push_back(first + static_cast<double>(k) * step);
    return out;
  }
};

struct SweepRanges {
  AxisRange f{0.0, 0.5};
  AxisRange g{0.0, 1.0};
  AxisRange eps{0.0, 0.5};
  AxisRange alpha{0.0, 0.5};
};

struct ConjectureReport {
  double step = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  double argmin_f = 0.0, argmin_g = 0.0, argmin_eps = 0.0, argmin_alpha = 0.0;
  std::size_t negative_count = 0;
  std::size_t cells_scanned = 0;
  std::array<std::size_t, 4> axis_counts{};  // f, g, eps, alpha
  double wall_time = 0.0;
  /// Largest estimated floating-point error of a single gap evaluation.
  double roundoff_budget = 0.0;
};

/// Scans (eps, alpha) pairs in parallel; each pair scans the full (f, g) plane.
/// progress, if given, receives the number of completed (eps, alpha) pairs.
template <class Progress>
ConjectureReport gap_sweep(double step, const SweepRanges& ranges, int threads, Progress&& progress) {
  if (!(step > 0.0 && step <= 0.1)) throw DomainError("step must lie in (0, 0.1]");
  const auto t0 = std::chrono::steady_clock::now();
  const auto fv = ranges.f.values(step), gv = ranges.g.values(step);
  const auto ev = ranges.eps.values(step), av = ranges.alpha.values(step);
  for (const auto* axis : {&fv, &gv, &ev, &av})
    for (double x : *axis) detail::check_open_unit(x, "sweep coordinate");

  struct Partial {
    double min_gap = std::numeric_limits<double>::infinity();
    std::size_t fi = 0, gj = 0;
    std::size_t negatives = 0;
    double budget = 0.0;
  };
  const std::size_t pairs = ev.size() * av.size();
  std::vector<Partial> part(pairs);
  std::atomic<std::size_t> done{0};
  parallel_for(pairs, resolve_threads(threads), [&](std::size_t idx) {
    const double eps = ev[idx / av.size()], alpha = av[idx % av.size()];
    const auto k = ChiCoefficients::of(alpha, eps);
    Partial& p = part[idx];
    for (std::size_t i = 0; i < fv.size(); ++i) {
      for (std::size_t j = 0; j < gv.size(); ++j) {
        const detail::GapTerms t = detail::gap_kernel(fv[i], gv[j], k);
        if (t.gap < p.min_gap) {
          p.min_gap = t.gap;
          p.fi = i;
          p.gj = j;
        }
        if (t.gap < 0.0) ++p.negatives;
        p.budget = std::max(p.budget, 8.0 * std::numeric_limits<double>::epsilon() * t.magnitude);
      }
    }
    progress(++done);
  });

  ConjectureReport rep;
  rep.step = step;
  rep.axis_counts = {fv.size(), gv.size(), ev.size(), av.size()};
  rep.cells_scanned = fv.size() * gv.size() * ev.size() * av.size();
  for (std::size_t idx = 0; idx < pairs; ++idx) {
    const Partial& p = part[idx];
    rep.negative_count += p.negatives;
    rep.roundoff_budget = std::max(rep.roundoff_budget, p.budget);
    if (p.min_gap < rep.min_gap) {
      rep.min_gap = p.min_gap;
      rep.argmin_f = fv[p.fi];
      rep.argmin_g = gv[p.gj];
      rep.argmin_eps = ev[idx / av.size()];
      rep.argmin_alpha = av[idx % av.size()];
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline ConjectureReport gap_sweep(double step, const SweepRanges& ranges = {}, int threads = 0) {
  return gap_sweep(step, ranges, threads, [](std::size_t) {});
}

struct EqualityAudit {
  std::vector<std::array<double, 2>> points;
  double max_abs_gap = 0.0;
  double max_abs_gradient = 0.0;

  [[nodiscard]] bool passed(double gap_tol = 1e-10, double grad_tol = 1e-5) const {
    return max_abs_gap <= gap_tol && max_abs_gradient <= grad_tol;
  }
};

/// Gap and central-difference gradient (step 1e-5) at the touching points.
inline EqualityAudit equality_point_audit(double alpha, double eps) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("alpha must lie in (0, 1/2]");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
  EqualityAudit out;
  const double ab = 1.0 - alpha;
  if (alpha == 0.5) {
    out.points = {{0.5, 0.5}};
  } else {
    out.points = {{alpha, 0.5}, {ab, 0.5}, {0.5, alpha}, {0.5, ab}};
  }
  const auto k = ChiCoefficients::of(alpha, eps);
  auto gap = [&](double f, double g) { return detail::gap_kernel(f, g, k).gap; };
  constexpr double h = 1e-5;
  for (const auto& pt : out.points) {
    const double f = pt[0], g = pt[1];
    out.max_abs_gap = std::max(out.max_abs_gap, std::abs(gap(f, g)));
    const double df = (gap(f + h, g) - gap(f - h, g)) / (2.0 * h);
    const double dg = (gap(f, g + h) - gap(f, g - h)) / (2.0 * h);
    out.max_abs_gradient = std::max({out.max_abs_gradient, std::abs(df), std::abs(dg)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reduced inequality near eps = 1/2

/// Right side minus left side, in nats:
///   a (ln 2 + h(alpha) - h(f) - h(g)) - 2 alpha (1-alpha) + 8 f(1-f) g(1-g),
/// with a = 2(1-2alpha) / ln((1-alpha)/alpha) (a = 1 at alpha = 1/2).
inline double reduced_slack(double alpha, double f, double g) {
  detail::check_open_unit(alpha, "alpha");
  detail::check_open_unit(f, "f");
  detail::check_open_unit(g, "g");
  const double d = 1.0 - 2.0 * alpha;
  const double a = 1.0 / detail::atanh_over_d(d);
  CompensatedSum acc;
  acc.add(a * kLn2);
  acc.add(a * binary_entropy(alpha));
  acc.add(-a * binary_entropy(f));
  acc.add(-a * binary_entropy(g));
  acc.add(-2.0 * alpha * (1.0 - alpha));
  acc.add(8.0 * f * (1.0 - f) * g * (1.0 - g));
  return acc.value();
}

struct ReducedReport {
  double step = 0.0;
  double min_slack = std::numeric_limits<double>::infinity();
  double argmin_alpha = 0.0, argmin_f = 0.0, argmin_g = 0.0;
  std::size_t negative_count = 0;
  std::size_t cells_scanned = 0;
};

inline ReducedReport reduced_sweep(double step, AxisRange alpha_range = {0.0, 0.5}, AxisRange f_range = {0.0, 0.5},
                           AxisRange g_range = {0.0, 1.0}) {
  if (!(step > 0.0 && step <= 0.1)) throw DomainError("step must lie in (0, 0.1]");
  const auto av = alpha_range.values(step), fv = f_range.values(step), gv = g_range.values(step);
  ReducedReport rep;
  rep.step = step;
  for (double a : av) {
    for (double f : fv) {
      for (double g : gv) {
        const double v = reduced_slack(a, f, g);
        ++rep.cells_scanned;
        if (v < 0.0) ++rep.negative_count;
        if (v < rep.min_slack) {
          rep.min_slack = v;
          rep.argmin_alpha = a;
          rep.argmin_f = f;
          rep.argmin_g = g;
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Surfaces over the open square

enum class SurfaceField { Omega0, Chi, Gap };

struct Surface {
  SurfaceField field = SurfaceField::Omega0;
  double alpha = 0.0;
  double eps = 0.0;
  std::vector<double> nodes;    // (k+1)/(n+1), shared by both axes
  std::vector<double> values;   // row-major, row = f index
};

inline Surface surface(SurfaceField field, double alpha, double eps, int grid_n) {
  if (grid_n < 33) throw DomainError("grid_n must be at least 33");
  const auto k = ChiCoefficients::of(alpha, eps);
  const auto fam = ParamFamily::bsc_kernel(eps);
  Surface out{field, alpha, eps, {}, {}};
  for (int i = 0; i < grid_n; ++i) out.nodes.push_back(static_cast<double>(i + 1) / (grid_n + 1));
  for (double f : out.nodes) {
    for (double g : out.nodes) {
      const JointDist p = param_to_joint(fam, f, g);
      const double omega = k.s * joint_entropy(p) - mutual_information(p);
      const double chi = chi_value(f, g, k);
      double v = omega;
      if (field == SurfaceField::Chi) v = chi;
      if (field == SurfaceField::Gap) v = chi - omega;
      out.values.push_back(v);
    }
  }
  return out;
}

inline const char* to_string(SurfaceField f) {
  switch (f) {
    case SurfaceField::Omega0: return "omega0";
    case SurfaceField::Chi: return "chi";
    case SurfaceField::Gap: return "gap";
  }
  return "?";
}

}  // namespace ikg
