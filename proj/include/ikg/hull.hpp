#pragma once

// Least concave majorant of extended-real samples on a line.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ikg/error.hpp"

namespace ikg {

/// Extended real: a finite value, or nullopt standing for -infinity.
using ExtReal = std::optional<double>;
inline constexpr std::nullopt_t kNegInf = std::nullopt;

namespace detail {

struct HullVertex {
  double x;
  double v;
};

/// Upper hull of finite samples with nondecreasing x. Samples sharing an
/// abscissa are merged, keeping the largest value.
inline void upper_hull(std::span<const double> x, std::span<const ExtReal> v, std::vector<HullVertex>& hull) {
  hull.clear();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!v[k]) continue;
    HullVertex p{x[k], *v[k]};
    if (!hull.empty() && hull.back().x == p.x) {
      if (p.v <= hull.back().v) continue;
      hull.pop_back();
    }
    while (hull.size() >= 2) {
      const HullVertex& a = hull[hull.size() - 2];
      const HullVertex& b = hull.back();
      // drop b when it lies on or below the chord a -> p
      if ((b.v - a.v) * (p.x - a.x) <= (p.v - a.v) * (b.x - a.x)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
}

/// Writes the majorant at every x (nondecreasing) into out. Inputs outside the
/// span of the finite samples stay -infinity; finite inputs never decrease.
inline void concave_majorant_sorted(std::span<const double> x, std::span<const ExtReal> v, std::span<ExtReal> out,
                                    std::vector<HullVertex>& hull) {
  upper_hull(x, v, hull);
  if (hull.empty()) {
    for (auto& o : out) o = kNegInf;
    return;
  }
  std::size_t seg = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double q = x[k];
    if (q < hull.front().x || q > hull.back().x) {
      out[k] = kNegInf;
      continue;
    }
    while (seg + 1 < hull.size() && hull[seg + 1].x <= q) ++seg;
    double h;
    if (seg + 1 == hull.size() || hull[seg].x == q) {
      h = hull[seg].v;
    } else {
      const HullVertex& a = hull[seg];
      const HullVertex& b = hull[seg + 1];
      h = a.v + (b.v - a.v) * ((q - a.x) / (b.x - a.x));
    }
    if (v[k] && *v[k] > h) h = *v[k];
    out[k] = h;
  }
}

}  // namespace detail

/// Least concave majorant of the finite samples, evaluated at the same
/// abscissae. x must be strictly increasing.
inline std::vector<ExtReal> upper_concave_hull_1d(std::span<const double> x, std::span<const ExtReal> v) {
  if (x.size() != v.size()) throw DomainError("abscissa and value counts differ");
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (!(x[k] > x[k - 1])) throw DomainError("abscissae must be strictly increasing");
  }
  std::vector<ExtReal> out(x.size());
  std::vector<detail::HullVertex> hull;
  detail::concave_majorant_sorted(x, v, out, hull);
  return out;
}

}  // namespace ikg
