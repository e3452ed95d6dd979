#include <gtest/gtest.h>

#include <array>
#include <random>

#include "ikg/conjecture.hpp"
#include "ikg/envelope.hpp"
#include "oracles.hpp"

using namespace ikg;

namespace {

// s and c straight from the logarithmic forms, in long double
long double s_long(long double a, long double e) {
  const long double ab = 1 - a, eb = 1 - e;
  const long double ae = a * eb + ab * e, abe = ab * eb + a * e;
  return (eb - e) * (std::log(ae) - std::log(abe)) / (std::log(a) - std::log(ab));
}

long double c_long_second(long double a, long double e) {
  const long double ab = 1 - a, eb = 1 - e;
  const long double ae = a * eb + ab * e, abe = ab * eb + a * e;
  const long double l = std::log(eb / e), r = std::log(abe / ae);
  return 4 * e * eb / (ab - a) * r - 4 * e * eb * (eb - e) * l * r / std::log(ab / a) - 4 * eb * e * l;
}

}  // namespace

TEST(TouchSlope, Values) {
  EXPECT_NEAR(touch_slope(0.3, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(touch_slope(0.11, 0.11), static_cast<double>(s_long(0.11L, 0.11L)), 1e-14);
  const double tiny = touch_slope(1e-6, 0.11);
  EXPECT_GT(tiny, 0.0);
  EXPECT_LT(tiny, touch_slope(1e-3, 0.11));
  EXPECT_LT(touch_slope(1e-3, 0.11), touch_slope(0.1, 0.11));
  EXPECT_THROW(touch_slope(0.0, 0.11), DomainError);
  EXPECT_THROW(touch_slope(0.2, 1.0), DomainError);
}

TEST(TouchSlope, HalfAlphaLimit) {
  for (double eps : {0.05, 0.11, 0.3, 0.45}) {
    const double w = 1 - 2 * eps;
    EXPECT_NEAR(touch_slope(0.5, eps), w * w, 1e-15);
    EXPECT_NEAR(touch_slope(0.5, eps), 0.5 * (touch_slope(0.5 + 1e-6, eps) + touch_slope(0.5 - 1e-6, eps)), 1e-9);
  }
}

TEST(ChiC, FormsAgreeAndMatchLogarithmicForm) {
  const auto c = chi_c_forms(0.11, 0.11);
  EXPECT_NEAR(c.first, c.second, 1e-12);
  EXPECT_NEAR(chi_c(0.11, 0.11), static_cast<double>(c_long_second(0.11L, 0.11L)), 1e-12);
  EXPECT_NEAR(chi_c(0.3, 0.5), 0.0, 1e-15);
}

TEST(ChiC, FormsAgreeOnRandomPairs) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(1e-4, 1 - 1e-4);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng), e = u(rng);
    const auto c = chi_c_forms(a, e);
    EXPECT_LE(std::abs(c.first - c.second), 1e-9 * c.scale) << a << ' ' << e;
    EXPECT_NO_THROW(chi_c(a, e));
  }
}

TEST(ChiC, HalfAlphaLimit) {
  for (double eps : {0.05, 0.11, 0.3, 0.45}) {
    const double w = 1 - 2 * eps, ee = eps * (1 - eps), l = std::log((1 - eps) / eps);
    const double closed = 8 * ee * w - 4 * ee * l * (w * w + 1);
    EXPECT_NEAR(chi_c(0.5, eps), closed, 1e-14);
    EXPECT_NEAR(chi_c(0.5, eps), 0.5 * (chi_c(0.5 + 1e-6, eps) + chi_c(0.5 - 1e-6, eps)), 1e-6);
  }
}

TEST(ChiGap, EqualityPointsAndSample) {
  for (double alpha : {0.11, 0.3}) {
    for (double eps : {0.11, 0.25}) {
      EXPECT_NEAR(chi_gap(alpha, 0.5, alpha, eps), 0.0, 1e-12);
      EXPECT_NEAR(chi_gap(1 - alpha, 0.5, alpha, eps), 0.0, 1e-12);
      EXPECT_NEAR(chi_gap(0.5, alpha, alpha, eps), 0.0, 1e-12);
      EXPECT_NEAR(chi_gap(0.5, 1 - alpha, alpha, eps), 0.0, 1e-12);
    }
  }
  EXPECT_GT(chi_gap(0.3, 0.7, 0.2, 0.11), 0.0);
  EXPECT_THROW(chi_gap(0.0, 0.5, 0.2, 0.11), DomainError);
}

TEST(ChiGap, KernelAgreesWithJointRoute) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int k = 0; k < 500; ++k) {
    const double f = u(rng), g = u(rng), a = u(rng), e = u(rng);
    const auto co = ChiCoefficients::of(a, e);
    EXPECT_NEAR(detail::gap_kernel(f, g, co).gap, chi_gap(f, g, a, e), 1e-12);
  }
}

TEST(ChiGap, Symmetries) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int k = 0; k < 500; ++k) {
    const double f = u(rng), g = u(rng), a = u(rng), e = u(rng);
    const double v = chi_gap(f, g, a, e);
    EXPECT_NEAR(v, chi_gap(1 - f, 1 - g, a, e), 1e-12);
    EXPECT_NEAR(v, chi_gap(g, f, a, e), 1e-12);
  }
}

TEST(Sweep, AxisConvention) {
  const auto v = AxisRange{0.0, 0.5}.values(0.01);
  ASSERT_EQ(v.size(), 50u);
  EXPECT_NEAR(v.front(), 0.01 / 3, 1e-15);
  EXPECT_NEAR(v.back(), 0.5 - 0.01 * 2 / 3, 1e-12);
  EXPECT_EQ(AxisRange({0.0, 1.0}).values(0.01).size(), 100u);
  EXPECT_EQ(AxisRange({0.3, 0.3}).values(0.01), std::vector<double>{0.3});
}

TEST(Sweep, CoarseStepNonnegative) {
  const auto r = gap_sweep(0.05);
  EXPECT_EQ(r.cells_scanned, r.axis_counts[0] * r.axis_counts[1] * r.axis_counts[2] * r.axis_counts[3]);
  EXPECT_EQ(r.cells_scanned, 10u * 20u * 10u * 10u);
  EXPECT_GE(r.min_gap, -1e-12);
  EXPECT_LT(r.wall_time, 5.0);
  EXPECT_NEAR(chi_gap(r.argmin_f, r.argmin_g, r.argmin_alpha, r.argmin_eps), r.min_gap, 1e-12);
}

TEST(Sweep, MinimumIsAttainedAndIndependentOfThreads) {
  SweepRanges ranges;
  ranges.eps = {0.05, 0.45};
  ranges.alpha = {0.05, 0.45};
  const auto a = gap_sweep(0.04, ranges, 1);
  const auto b = gap_sweep(0.04, ranges, 3);
  EXPECT_EQ(a.min_gap, b.min_gap);
  EXPECT_EQ(a.argmin_f, b.argmin_f);
  EXPECT_EQ(a.argmin_g, b.argmin_g);
  EXPECT_EQ(a.negative_count, b.negative_count);
  // brute-force minimum over the same axes
  double best = INFINITY;
  for (double e : ranges.eps.values(0.04))
    for (double al : ranges.alpha.values(0.04))
      for (double f : ranges.f.values(0.04))
        for (double g : ranges.g.values(0.04)) best = std::min(best, chi_gap(f, g, al, e));
  EXPECT_NEAR(a.min_gap, best, 1e-12);
}

TEST(Sweep, SingleCellAtEqualityPoint) {
  SweepRanges r{{0.11, 0.11}, {0.5, 0.5}, {0.11, 0.11}, {0.11, 0.11}};
  const auto rep = gap_sweep(0.01, r, 1);
  EXPECT_EQ(rep.cells_scanned, 1u);
  EXPECT_NEAR(rep.min_gap, 0.0, 1e-12);
}

TEST(Audit, EqualityPoints) {
  const auto a = equality_point_audit(0.11, 0.11);
  EXPECT_EQ(a.points.size(), 4u);
  EXPECT_TRUE(a.passed());
  EXPECT_TRUE(equality_point_audit(0.49, 0.49).passed(1e-10, 1e-4));
  const auto half = equality_point_audit(0.5, 0.2);
  EXPECT_EQ(half.points.size(), 1u);
  EXPECT_TRUE(half.passed());
}

TEST(ReducedInequality, ZerosAndSymmetry) {
  for (int k = 1; k < 50; ++k) {
    const double a = k / 100.0;
    EXPECT_NEAR(reduced_slack(a, a, 0.5), 0.0, 1e-10);
  }
  EXPECT_NEAR(reduced_slack(0.5, 0.5, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(reduced_slack(0.2, 0.3, 0.1), reduced_slack(0.2, 0.3, 0.9), 1e-15);
  EXPECT_NEAR(reduced_slack(0.2, 0.3, 0.1), reduced_slack(0.2, 0.1, 0.3), 1e-15);
  // alpha = 1/2 continuity
  EXPECT_NEAR(reduced_slack(0.5, 0.3, 0.2), 0.5 * (reduced_slack(0.5 + 1e-7, 0.3, 0.2) + reduced_slack(0.5 - 1e-7, 0.3, 0.2)), 1e-10);
}

TEST(ReducedInequality, GridNonnegative) {
  const auto r = reduced_sweep(0.02);
  EXPECT_GE(r.min_slack, -1e-12);
  EXPECT_EQ(r.cells_scanned, 25u * 25u * 50u);
}

TEST(Surfaces, GapIsChiMinusOmega) {
  const auto om = surface(SurfaceField::Omega0, 0.11, 0.11, 33);
  const auto chi = surface(SurfaceField::Chi, 0.11, 0.11, 33);
  const auto gap = surface(SurfaceField::Gap, 0.11, 0.11, 33);
  ASSERT_EQ(om.values.size(), 33u * 33u);
  EXPECT_NEAR(om.nodes.front(), 1.0 / 34, 1e-15);
  for (std::size_t k = 0; k < gap.values.size(); ++k) {
    EXPECT_NEAR(gap.values[k], chi.values[k] - om.values[k], 1e-14);
    EXPECT_GE(gap.values[k], -1e-12);
  }
  // strict gap at the centre of the square
  const std::size_t mid = 16;
  EXPECT_NEAR(om.nodes[mid], 0.5, 1e-15);
  EXPECT_GT(gap.values[mid * 33 + mid], 1e-6);
  EXPECT_THROW(surface(SurfaceField::Gap, 0.11, 0.11, 20), DomainError);
}

TEST(EnvelopeConsistency, OmegaInfTouchesAtEqualityPoints) {
  // where chi dominates omega0, omega_inf^s equals omega0 at the four points
  const double alpha = 0.25, eps = 0.11;
  const double s = touch_slope(alpha, eps);
  EnvelopeConfig cfg;
  cfg.grid_n = 201;
  const auto res = omega_r(s, ParamFamily::bsc_kernel(eps), kInfiniteRounds, cfg);
  const auto& grid = res.fn.grid();
  auto idx = [&](double x) { return static_cast<std::size_t>(std::lround(x * 200)); };
  const std::array<std::array<double, 2>, 4> pts{{{alpha, 0.5}, {1 - alpha, 0.5}, {0.5, alpha}, {0.5, 1 - alpha}}};
  for (const auto& p : pts) {
    const std::size_t a = idx(p[0]), b = idx(p[1]);
    ASSERT_NEAR(grid.f_nodes()[a], p[0], 1e-12);
    const JointDist q = param_to_joint(ParamFamily::bsc_kernel(eps), p[0], p[1]);
    EXPECT_NEAR(*res.fn.at(a, b), eval_omega0(s, q), 1e-6);
  }
}
