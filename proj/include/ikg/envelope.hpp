#pragma once

// Functionals sampled on an (f,g) grid over a chart of a binary lower set,
// marginal concavification along fibers, and the alternating X/Y iteration
// that yields omega_r^s and sigma_r.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "ikg/core.hpp"
#include "ikg/error.hpp"
#include "ikg/hull.hpp"
#include "ikg/parallel.hpp"

namespace ikg {

enum class Axis { X, Y };

/// Number of alternating passes; kInfiniteRounds iterates to a fixed point.
using Rounds = int;
inline constexpr Rounds kInfiniteRounds = -1;

inline constexpr double kIndependenceTol = 1e-10;

struct EnvelopeConfig {
  int grid_n = 201;
  double sup_norm_tol = 1e-8;
  int max_passes = 500;
  int threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (grid_n < 33) throw DomainError("grid_n must be at least 33");
    if (grid_n % 2 == 0) throw DomainError("grid_n must be odd");
    if (!(sup_norm_tol > 0.0)) throw DomainError("sup_norm_tol must be positive");
    if (max_passes < 1) throw DomainError("max_passes must be positive");
  }
};

/// P_X(1) (axis X) or P_Y(1) (axis Y) of the chart point.
inline double fiber_coordinate(const ParamFamily& fam, double f, double g, Axis axis) {
  const Cells2x2 c = param_to_cells(fam, f, g);
  return axis == Axis::X ? c[2] + c[3] : c[1] + c[3];
}

/// s H(X,Y) - I(X;Y).
inline double eval_omega0(double s, const JointDist& p) {
  if (!(s > 0.0)) throw DomainError("s must be positive");
  return s * joint_entropy(p) - mutual_information(p);
}

/// H(X,Y) where I(X;Y) <= indep_tol, -infinity elsewhere.
inline ExtReal eval_sigma0(const JointDist& p, double indep_tol = kIndependenceTol) {
  if (mutual_information(p) <= indep_tol) return joint_entropy(p);
  return kNegInf;
}

/// Chart sampled on a tensor grid, with per-cell information measures and
/// fiber orderings cached. Node i on the f axis and j on the g axis is cell
/// i * g_count + j.
class ChartGrid {
 public:
  struct FiberEntry {
    std::size_t cell;
    double t;
  };

  ChartGrid(const ParamFamily& fam, std::vector<double> f_nodes, std::vector<double> g_nodes)
      : fam_(fam), f_(std::move(f_nodes)), g_(std::move(g_nodes)) {
    check_nodes(f_, "f");
    check_nodes(g_, "g");
    const std::size_t nf = f_.size(), ng = g_.size();
    singular_.assign(nf * ng, false);
    h_.assign(nf * ng, 0.0);
    i_.assign(nf * ng, 0.0);
    tx_.assign(nf * ng, 0.0);
    ty_.assign(nf * ng, 0.0);
    for (std::size_t a = 0; a < nf; ++a) {
      for (std::size_t b = 0; b < ng; ++b) {
        const std::size_t k = a * ng + b;
        if (chart_singular(fam_, f_[a], g_[b])) {
          singular_[k] = true;
          continue;
        }
        const Cells2x2 c = param_to_cells(fam_, f_[a], g_[b]);
        const double px1 = c[2] + c[3], py1 = c[1] + c[3];
        const double hxy = detail::unchecked_entropy(c);
        const double hx = -xlogx(px1) - xlogx(1.0 - px1);
        const double hy = -xlogx(py1) - xlogx(1.0 - py1);
        h_[k] = hxy;
        i_[k] = std::max(hx + hy - hxy, 0.0);
        tx_[k] = px1;
        ty_[k] = py1;
      }
    }
    x_fibers_.resize(ng);
    for (std::size_t b = 0; b < ng; ++b) {
      for (std::size_t a = 0; a < nf; ++a) {
        const std::size_t k = a * ng + b;
        if (!singular_[k]) x_fibers_[b].push_back({k, tx_[k]});
      }
      sort_fiber(x_fibers_[b]);
    }
    y_fibers_.resize(nf);
    for (std::size_t a = 0; a < nf; ++a) {
      for (std::size_t b = 0; b < ng; ++b) {
        const std::size_t k = a * ng + b;
        if (!singular_[k]) y_fibers_[a].push_back({k, ty_[k]});
      }
      sort_fiber(y_fibers_[a]);
    }
    base_f_index_ = locate(f_, fam_.base_f);
    base_g_index_ = locate(g_, fam_.base_g);
  }

  /// Nodes i/(n-1) on both axes; the base point is inserted if it is not a node.
  static std::shared_ptr<const ChartGrid> uniform(const ParamFamily& fam, int grid_n) {
    if (grid_n < 3) throw DomainError("grid_n must be at least 3");
    auto nodes = [grid_n](double extra) {
      std::vector<double> v(static_cast<std::size_t>(grid_n));
      for (int k = 0; k < grid_n; ++k) v[k] = static_cast<double>(k) / (grid_n - 1);
      auto it = std::lower_bound(v.begin(), v.end(), extra);
      if (it != v.end() && std::abs(*it - extra) <= 1e-12) {
        *it = extra;
      } else if (it != v.begin() && std::abs(*(it - 1) - extra) <= 1e-12) {
        *(it - 1) = extra;
      } else {
        v.insert(it, extra);
      }
      return v;
    };
    return std::make_shared<const ChartGrid>(fam, nodes(fam.base_f), nodes(fam.base_g));
  }

  [[nodiscard]] const ParamFamily& family() const { return fam_; }
  [[nodiscard]] const std::vector<double>& f_nodes() const { return f_; }
  [[nodiscard]] const std::vector<double>& g_nodes() const { return g_; }
  [[nodiscard]] std::size_t cell_count() const { return f_.size() * g_.size(); }
  [[nodiscard]] std::size_t cell(std::size_t fi, std::size_t gj) const { return fi * g_.size() + gj; }
  [[nodiscard]] bool singular(std::size_t k) const { return singular_[k]; }
  [[nodiscard]] std::size_t singular_count() const {
    return static_cast<std::size_t>(std::count(singular_.begin(), singular_.end(), true));
  }
  [[nodiscard]] double joint_entropy_at(std::size_t k) const { return h_[k]; }
  [[nodiscard]] double mutual_information_at(std::size_t k) const { return i_[k]; }
  [[nodiscard]] double coordinate(std::size_t k, Axis axis) const { return axis == Axis::X ? tx_[k] : ty_[k]; }
  [[nodiscard]] std::size_t base_cell() const { return cell(base_f_index_, base_g_index_); }

  /// Fibers along the given axis: for X one per g node, for Y one per f node,
  /// sorted by the marginal coordinate, singular cells left out.
  [[nodiscard]] const std::vector<std::vector<FiberEntry>>& fibers(Axis axis) const {
    return axis == Axis::X ? x_fibers_ : y_fibers_;
  }

 private:
  static void check_nodes(const std::vector<double>& v, const char* name) {
    if (v.size() < 2) throw DomainError(std::string(name) + " axis needs at least two nodes");
    for (std::size_t k = 0; k < v.size(); ++k) {
      detail::check_probability(v[k], "grid node");
      if (k > 0 && !(v[k] > v[k - 1])) throw DomainError(std::string(name) + " nodes must increase");
    }
  }
  static void sort_fiber(std::vector<FiberEntry>& fiber) {
    std::stable_sort(fiber.begin(), fiber.end(), [](const FiberEntry& l, const FiberEntry& r) { return l.t < r.t; });
  }
  static std::size_t locate(const std::vector<double>& v, double x) {
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] == x) return k;
    throw DomainError("base point is not a grid node");
  }

  ParamFamily fam_;
  std::vector<double> f_, g_;
  std::vector<bool> singular_;
  std::vector<double> h_, i_, tx_, ty_;
  std::vector<std::vector<FiberEntry>> x_fibers_, y_fibers_;
  std::size_t base_f_index_ = 0, base_g_index_ = 0;
};

using ChartGridPtr = std::shared_ptr<const ChartGrid>;

/// Extended-real values on a ChartGrid. Singular cells hold -infinity.
class GridFunctional {
 public:
  GridFunctional(ChartGridPtr grid, std::vector<ExtReal> values) : grid_(std::move(grid)), v_(std::move(values)) {
    if (v_.size() != grid_->cell_count()) throw DomainError("value count differs from grid size");
    for (std::size_t k = 0; k < v_.size(); ++k)
      if (grid_->singular(k)) v_[k] = kNegInf;
  }

  /// Samples fn(joint) at every non-singular cell.
  template <class Fn>
  static GridFunctional sample(ChartGridPtr grid, Fn&& fn) {
    const auto& fam = grid->family();
    std::vector<ExtReal> v(grid->cell_count(), kNegInf);
    for (std::size_t a = 0; a < grid->f_nodes().size(); ++a) {
      for (std::size_t b = 0; b < grid->g_nodes().size(); ++b) {
        const std::size_t k = grid->cell(a, b);
        if (grid->singular(k)) continue;
        v[k] = ExtReal(fn(param_to_joint(fam, grid->f_nodes()[a], grid->g_nodes()[b])));
      }
    }
    return GridFunctional(std::move(grid), std::move(v));
  }

  [[nodiscard]] const ChartGrid& grid() const { return *grid_; }
  [[nodiscard]] const ChartGridPtr& grid_ptr() const { return grid_; }
  [[nodiscard]] const std::vector<ExtReal>& values() const { return v_; }
  [[nodiscard]] std::vector<ExtReal>& values() { return v_; }
  [[nodiscard]] const ExtReal& at(std::size_t fi, std::size_t gj) const { return v_[grid_->cell(fi, gj)]; }
  [[nodiscard]] const ExtReal& at_base() const { return v_[grid_->base_cell()]; }

 private:
  ChartGridPtr grid_;
  std::vector<ExtReal> v_;
};

/// omega_0^s on the grid, from the cached H and I.
inline GridFunctional omega0_grid(ChartGridPtr grid, double s) {
  if (!(s > 0.0)) throw DomainError("s must be positive");
  std::vector<ExtReal> v(grid->cell_count(), kNegInf);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!grid->singular(k)) v[k] = s * grid->joint_entropy_at(k) - grid->mutual_information_at(k);
  return GridFunctional(std::move(grid), std::move(v));
}

inline GridFunctional sigma0_grid(ChartGridPtr grid, double indep_tol = kIndependenceTol) {
  std::vector<ExtReal> v(grid->cell_count(), kNegInf);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!grid->singular(k) && grid->mutual_information_at(k) <= indep_tol) v[k] = grid->joint_entropy_at(k);
  return GridFunctional(std::move(grid), std::move(v));
}

/// Concave majorant along every fiber of the given axis, in the fiber's
/// marginal coordinate.
inline GridFunctional marginal_envelope_pass(const GridFunctional& fn, Axis axis, int threads = 1) {
  const ChartGrid& grid = fn.grid();
  const auto& fibers = grid.fibers(axis);
  GridFunctional out = fn;
  auto& dst = out.values();
  const auto& src = fn.values();
  parallel_for(fibers.size(), resolve_threads(threads), [&](std::size_t idx) {
    const auto& fiber = fibers[idx];
    std::vector<double> x(fiber.size());
    std::vector<ExtReal> v(fiber.size()), h(fiber.size());
    std::vector<detail::HullVertex> hull;
    for (std::size_t k = 0; k < fiber.size(); ++k) {
      x[k] = fiber[k].t;
      v[k] = src[fiber[k].cell];
    }
    detail::concave_majorant_sorted(x, v, h, hull);
    for (std::size_t k = 0; k < fiber.size(); ++k) dst[fiber[k].cell] = h[k];
  });
  return out;
}

/// Largest change between two iterates; a cell turning finite counts as +infinity.
inline double sup_norm_change(const GridFunctional& before, const GridFunctional& after) {
  double delta = 0.0;
  const auto& a = before.values();
  const auto& b = after.values();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && b[k]) {
      delta = std::max(delta, std::abs(*b[k] - *a[k]));
    } else if (a[k].has_value() != b[k].has_value()) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return delta;
}

struct EnvelopeResult {
  GridFunctional fn;
  int passes = 0;
  bool converged = true;
  double last_delta = 0.0;
};

/// Alternates X and Y passes (X first) until a pass changes no finite cell by
/// sup_norm_tol or more, or max_passes is reached (converged = false).
inline EnvelopeResult xy_concave_envelope(const GridFunctional& fn0, const EnvelopeConfig& cfg) {
  if (!(cfg.sup_norm_tol > 0.0) || cfg.max_passes < 1) throw DomainError("invalid envelope configuration");
  EnvelopeResult res{fn0, 0, false, std::numeric_limits<double>::infinity()};
  while (res.passes < cfg.max_passes) {
    const Axis axis = res.passes % 2 == 0 ? Axis::X : Axis::Y;
    GridFunctional next = marginal_envelope_pass(res.fn, axis, cfg.threads);
    res.last_delta = sup_norm_change(res.fn, next);
    res.fn = std::move(next);
    ++res.passes;
    if (res.passes >= 2 && res.last_delta < cfg.sup_norm_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

/// r alternating passes (odd passes X, even passes Y), or the fixed point.
inline EnvelopeResult apply_rounds(const GridFunctional& fn0, Rounds r, const EnvelopeConfig& cfg) {
  if (r == kInfiniteRounds) return xy_concave_envelope(fn0, cfg);
  if (r < 0) throw DomainError("rounds must be nonnegative or infinite");
  EnvelopeResult res{fn0, 0, true, 0.0};
  for (int k = 0; k < r; ++k) {
    GridFunctional next = marginal_envelope_pass(res.fn, k % 2 == 0 ? Axis::X : Axis::Y, cfg.threads);
    res.last_delta = sup_norm_change(res.fn, next);
    res.fn = std::move(next);
    ++res.passes;
  }
  return res;
}

inline EnvelopeResult omega_r(double s, const ChartGridPtr& grid, Rounds r, const EnvelopeConfig& cfg) {
  return apply_rounds(omega0_grid(grid, s), r, cfg);
}

inline EnvelopeResult omega_r(double s, const ParamFamily& fam, Rounds r, const EnvelopeConfig& cfg) {
  cfg.validate();
  return omega_r(s, ChartGrid::uniform(fam, cfg.grid_n), r, cfg);
}

inline EnvelopeResult sigma_r(const ChartGridPtr& grid, Rounds r, const EnvelopeConfig& cfg) {
  return apply_rounds(sigma0_grid(grid), r, cfg);
}

inline EnvelopeResult sigma_r(const ParamFamily& fam, Rounds r, const EnvelopeConfig& cfg) {
  cfg.validate();
  return sigma_r(ChartGrid::uniform(fam, cfg.grid_n), r, cfg);
}

}  // namespace ikg
