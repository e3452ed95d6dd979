#include <gtest/gtest.h>

#include "ikg/correlation.hpp"
#include "ikg/rates.hpp"
#include "oracles.hpp"

using namespace ikg;

namespace {

EnvelopeConfig cfg_n(int n) {
  EnvelopeConfig cfg;
  cfg.grid_n = n;
  return cfg;
}

}  // namespace

TEST(SupportValue, ZeroForSlopesAtLeastOne) {
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(0.11), 65);
  for (double s : {1.0, 1.5}) {
    EXPECT_NEAR(support_value(grid, 1, s, cfg_n(65)).phi, 0.0, 1e-12);
    EXPECT_NEAR(support_value(grid, kInfiniteRounds, s, cfg_n(65)).phi, 0.0, 1e-12);
  }
}

TEST(SupportValue, OneWayMatchesAlphaScan) {
  const double eps = 0.11;
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(eps), 201);
  for (double s : {0.1, 0.3, 0.5}) {
    const double phi = support_value(grid, 1, s, cfg_n(201)).phi;
    const double ref = oracle::bss_one_way_phi(eps, s);
    EXPECT_GT(phi, 0.0);
    EXPECT_LE(phi, ref + 1e-12);  // grid values are achievable
    EXPECT_NEAR(phi, ref, 1e-5);
  }
}

TEST(SupportValue, IndependentSourceIsZero) {
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(0.5), 65);
  for (double s : {0.05, 0.3, 0.9}) EXPECT_NEAR(support_value(grid, kInfiniteRounds, s, cfg_n(65)).phi, 0.0, 1e-12);
}

TEST(SupportValue, NonnegativeNonincreasingConvex) {
  for (const auto& fam : {ParamFamily::bsc_kernel(0.11), ParamFamily::bsc_kernel(0.3, 0.3, 0.3), ParamFamily::support_three(0.6, 0.5)}) {
    const auto grid = ChartGrid::uniform(fam, 65);
    for (Rounds r : {1, kInfiniteRounds}) {
      std::vector<double> phi;
      for (int k = 0; k <= 20; ++k) phi.push_back(support_value(grid, r, 0.05 * k, cfg_n(65)).phi);
      for (std::size_t k = 0; k < phi.size(); ++k) {
        EXPECT_GE(phi[k], -1e-9);
        if (k > 0) {
          EXPECT_LE(phi[k], phi[k - 1] + 1e-9);
        }
        if (k > 1) {
          EXPECT_GE(phi[k] - 2 * phi[k - 1] + phi[k - 2], -1e-9);
        }
      }
    }
  }
}

TEST(Threshold, BssOneWayAndInteractive) {
  for (double eps : {0.05, 0.11, 0.2}) {
    const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(eps), 201);
    const double w2 = (1 - 2 * eps) * (1 - 2 * eps);
    const auto one = s_star(grid, 1, cfg_n(201));
    EXPECT_NEAR(one.s_star, w2, 5e-3);
    EXPECT_LE(one.hi - one.lo, 1e-5);
    EXPECT_TRUE(one.converged);
  }
  const auto inf = s_star(ParamFamily::bsc_kernel(0.11), kInfiniteRounds, cfg_n(201));
  EXPECT_NEAR(inf.s_star, 0.6084, 5e-3);
}

TEST(Threshold, IndependentIsZero) {
  const auto res = s_star(ParamFamily::bsc_kernel(0.5), kInfiniteRounds, cfg_n(65));
  EXPECT_EQ(res.s_star, 0.0);
  EXPECT_THROW(s_star(ParamFamily::bsc_kernel(0.11), 1, cfg_n(65), 1e-7), DomainError);
}

TEST(Threshold, ChainAgainstMaximalCorrelation) {
  for (double eps : {0.05, 0.11, 0.2, 0.3}) {
    const auto fam = ParamFamily::bsc_kernel(eps);
    const auto grid = ChartGrid::uniform(fam, 101);
    const double s1 = s_star(grid, 1, cfg_n(101)).s_star;
    const double sinf = s_star(grid, kInfiniteRounds, cfg_n(101)).s_star;
    const double sup = sup_rho_m_over_lower_set(fam, 101).value;
    EXPECT_LE(s1, sinf + 1e-2);
    EXPECT_LE(sinf, sup + 1e-2);
  }
}

TEST(Threshold, AsymmetricChainAndRounds) {
  const auto fam = ParamFamily::bsc_kernel(0.11, 0.3, 0.3);
  const auto grid = ChartGrid::uniform(fam, 101);
  const double s1 = s_star(grid, 1, cfg_n(101)).s_star;
  const double s2 = s_star(grid, 2, cfg_n(101)).s_star;
  const double sinf = s_star(grid, kInfiniteRounds, cfg_n(101)).s_star;
  EXPECT_LE(s1, s2 + 1e-4);
  EXPECT_LE(s2, sinf + 1e-4);
  EXPECT_LE(sinf, sup_rho_m_over_lower_set(fam, 101).value + 1e-2);
}

TEST(Threshold, ErasureOneWay) {
  for (double e : {0.2, 0.5, 0.7}) {
    const JointDist q(2, 3, {0.5 * (1 - e), 0.5 * e, 0.0, 0.0, 0.5 * e, 0.5 * (1 - e)});
    EXPECT_NEAR(s_star_one_way_binary_x(q).s_star, 1 - e, 5e-3);
  }
  // the fiber envelope agrees with the chart pass on a BSS
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(0.11), 201);
  EXPECT_NEAR(one_way_support_value(bss(0.11), 0.3, 201).phi, support_value(grid, 1, 0.3, cfg_n(201)).phi, 1e-12);
}

TEST(Kbib, Values) {
  const auto k = kbib(ParamFamily::bsc_kernel(0.11), kInfiniteRounds, cfg_n(201));
  EXPECT_FALSE(k.infinite);
  EXPECT_NEAR(k.gamma, 0.6084 / 0.3916, 3e-2);
  EXPECT_EQ(kbib(ParamFamily::bsc_kernel(0.5), 1, cfg_n(65)).gamma, 0.0);
  const auto perfect = kbib(ParamFamily::bsc_kernel(0.0), 1, cfg_n(65));
  EXPECT_TRUE(perfect.infinite);
  EXPECT_NEAR(gaussian_kbib(0.5), 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(std::isinf(gaussian_kbib(1.0)));
  EXPECT_THROW(gaussian_kbib(1.5), DomainError);
}

TEST(Kbib, OneWayAtMostInteractive) {
  const auto fam = ParamFamily::bsc_kernel(0.2, 0.3, 0.6);
  const auto grid = ChartGrid::uniform(fam, 101);
  EXPECT_LE(kbib(grid, 1, cfg_n(101)).gamma, kbib(grid, kInfiniteRounds, cfg_n(101)).gamma + 1e-9);
}

TEST(Mimk, BssBothRoutes) {
  for (double eps : {0.11, 0.3}) {
    const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(eps), 201);
    for (Rounds r : {1, kInfiniteRounds}) {
      const double a = mimk_sigma_route(grid, r, cfg_n(201)).value;
      const auto b = mimk_limit_route(grid, r, default_limit_sequence(), cfg_n(201));
      EXPECT_NEAR(a, oracle::h2(eps), 2e-3);
      EXPECT_NEAR(b.value, oracle::h2(eps), 2e-3);
      EXPECT_NEAR(a, b.value, 1e-2);
      EXPECT_EQ(b.estimates.size(), 5u);
    }
  }
}

TEST(Mimk, IndependentIsZero) {
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(0.5), 65);
  EXPECT_NEAR(mimk_sigma_route(grid, kInfiniteRounds, cfg_n(65)).value, 0.0, 1e-12);
  EXPECT_NEAR(mimk_limit_route(grid, kInfiniteRounds, default_limit_sequence(), cfg_n(65)).value, 0.0, 1e-9);
}

TEST(Mimk, DualRouteOnAsymmetricBases) {
  for (const auto& fam : {ParamFamily::bsc_kernel(0.11, 0.5, 0.3), ParamFamily::support_three(0.6, 0.5)}) {
    const auto grid = ChartGrid::uniform(fam, 201);
    for (Rounds r : {1, kInfiniteRounds}) {
      const double a = mimk_sigma_route(grid, r, cfg_n(201)).value;
      const double b = mimk_limit_route(grid, r, default_limit_sequence(), cfg_n(201)).value;
      EXPECT_NEAR(a, b, 1e-2);
    }
  }
}

TEST(Mimk, NonincreasingInRoundsAndStrictForSupportThree) {
  const auto grid = ChartGrid::uniform(ParamFamily::support_three(0.6, 0.5), 101);
  double prev = INFINITY;
  for (Rounds r : {1, 2, 3, 4}) {
    const double v = mimk_sigma_route(grid, r, cfg_n(101)).value;
    EXPECT_LE(v, prev + 1e-9);
    EXPECT_GE(v, -1e-9);
    prev = v;
  }
  const double inf = mimk_sigma_route(grid, kInfiniteRounds, cfg_n(101)).value;
  EXPECT_LE(inf, prev + 1e-9);
  EXPECT_GT(mimk_sigma_route(grid, 1, cfg_n(101)).value - inf, 1e-3);
}

TEST(Mimk, LimitRouteValidatesSequence) {
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(0.11), 33);
  EXPECT_THROW(mimk_limit_route(grid, 1, {0.1, 0.2, 0.05}, cfg_n(33)), DomainError);
  EXPECT_THROW(mimk_limit_route(grid, 1, {0.1, 0.05}, cfg_n(33)), DomainError);
  EXPECT_THROW(mimk_sigma_route(grid, 0, cfg_n(33)), DomainError);
}

TEST(OneWayCheck, Verdicts) {
  const auto cfg = cfg_n(101);
  const auto bss_rep = one_way_check(ParamFamily::bsc_kernel(0.11), cfg);
  EXPECT_TRUE(bss_rep.one_way_optimal);
  EXPECT_NEAR(bss_rep.sigma1, oracle::h2(0.11), 1e-9);
  EXPECT_NEAR(bss_rep.sigma_inf, bss_rep.sigma1, 2e-6);

  const auto asym = one_way_check(ParamFamily::bsc_kernel(0.11, 0.3, 0.3), cfg);
  EXPECT_FALSE(asym.one_way_optimal);
  EXPECT_GT(asym.sigma3 - asym.sigma1, 1e-3);

  const auto s3 = one_way_check(ParamFamily::support_three(0.6, 0.5), cfg);
  EXPECT_FALSE(s3.one_way_optimal);
  EXPECT_GT(s3.sigma3 - s3.sigma1, 1e-3);

  const auto ind = one_way_check(ParamFamily::bsc_kernel(0.5), cfg);
  EXPECT_TRUE(ind.one_way_optimal);
  EXPECT_NEAR(ind.one_way_gap, 0.0, 1e-12);
}

TEST(OneWayCheck, BscKernelFromOneSideIsOneWayOptimal) {
  // at g0 = 1/2 the channel X -> Y is a BSC, so the reverse one-way scheme is optimal
  const auto rep = one_way_check(ParamFamily::bsc_kernel(0.11, 0.5, 0.3), cfg_n(101));
  EXPECT_TRUE(rep.one_way_optimal);
  EXPECT_NEAR(rep.sigma1_transposed, rep.sigma_inf, 2e-6);
}

TEST(OneWayCheck, TransposedOrientationIsTheFirstYPass) {
  const auto fam = ParamFamily::bsc_kernel(0.11, 0.3, 0.7);
  const auto cfg = cfg_n(65);
  const auto grid = ChartGrid::uniform(fam, cfg.grid_n);
  const auto ypass = marginal_envelope_pass(sigma0_grid(grid), Axis::Y);
  EXPECT_NEAR(one_way_check(fam, cfg).sigma1_transposed, *ypass.at_base(), 1e-9);
}

TEST(Region, OneWayMatchesAlphaCurve) {
  const double eps = 0.11;
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(eps), 201);
  const auto cfg = cfg_n(201);
  std::vector<double> s_values, expect;
  for (int k = 0; k < 20; ++k) {
    const double a = 0.5 * (k + 0.5) / 20;
    s_values.push_back(kLn2 - oracle::h2(a));
    expect.push_back(kLn2 - oracle::h2(oracle::conv(a, eps)));
  }
  const auto b = rate_region_boundary(grid, 1, region_slopes(s_star(grid, 1, cfg).s_star), s_values, cfg);
  ASSERT_EQ(b.points.size(), 20u);
  for (std::size_t k = 0; k < 20; ++k) EXPECT_NEAR(b.points[k].R, expect[k], 2e-3);
  EXPECT_TRUE(b.warnings.empty());
}

TEST(Region, InvariantsAndNesting) {
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(0.2, 0.4, 0.6), 65);
  const auto cfg = cfg_n(65);
  const auto slopes = geometric_slopes(1e-3, 1.0, 40);
  const auto one = rate_region_boundary(grid, 1, slopes, {}, cfg);
  const auto inf = rate_region_boundary(grid, kInfiniteRounds, slopes, {}, cfg);
  ASSERT_EQ(one.points.size(), 101u);
  EXPECT_NEAR(one.points.front().R, 0.0, 1e-12);
  for (std::size_t k = 0; k < one.points.size(); ++k) {
    const auto& p = inf.points[k];
    EXPECT_LE(p.R, inf.mutual_information + 1e-9);
    EXPECT_GE(p.S, p.R - 1e-9);
    EXPECT_LE(one.points[k].R, p.R + 1e-9);
    if (k > 0) {
      EXPECT_GE(p.R, inf.points[k - 1].R - 1e-12);
    }
    if (k > 1) {
      EXPECT_LE(p.R - 2 * inf.points[k - 1].R + inf.points[k - 2].R, 1e-9);
    }
  }
}

TEST(Region, IndependentAndPerfectSources) {
  const auto cfg = cfg_n(65);
  const auto ind = rate_region_boundary(ChartGrid::uniform(ParamFamily::bsc_kernel(0.5), 65), 1, geometric_slopes(), {}, cfg);
  for (const auto& p : ind.points) EXPECT_NEAR(p.R, 0.0, 1e-12);
  const auto perfect =
      rate_region_boundary(ChartGrid::uniform(ParamFamily::bsc_kernel(0.0), 65), 1, geometric_slopes(), {kLn2}, cfg);
  EXPECT_NEAR(perfect.points[0].R, kLn2, 1e-9);
}

TEST(Region, RejectsBadSlopes) {
  const auto grid = ChartGrid::uniform(ParamFamily::bsc_kernel(0.11), 33);
  EXPECT_THROW(rate_region_boundary(grid, 1, {0.5, 0.2}, {}, cfg_n(33)), DomainError);
  EXPECT_THROW(rate_region_boundary(grid, 1, {}, {}, cfg_n(33)), DomainError);
}

TEST(Converse, Values) {
  const double s = 0.6084;
  const auto lim = converse_bound(1e12, 10.0, 1e-12, s);
  EXPECT_NEAR(lim.ratio_bound, s / (1 - s), 1e-9);
  const auto mid = converse_bound(100.0, 50.0, 0.01, s);
  EXPECT_FALSE(mid.infinite);
  EXPECT_GT(mid.ratio_bound, s / (1 - s));
  const double factor = 1 - (7 - 5 * s) / (1 - s) * 0.01 -
                        (2 * 0.01 * std::log(1 / 0.02) + (1 + s) / (1 - s) * std::log(2.0)) / 100.0;
  EXPECT_NEAR(mid.ratio_bound, s / (1 - s) / factor, 1e-12);
  EXPECT_NEAR(mid.key_bound, 50.0 * mid.ratio_bound, 1e-9);
  EXPECT_TRUE(converse_bound(100.0, 50.0, 0.3, s).infinite);
  EXPECT_THROW(converse_bound(0.0, 1.0, 0.1, s), DomainError);
  EXPECT_THROW(converse_bound(1.0, 1.0, 0.0, s), DomainError);
  EXPECT_THROW(converse_bound(1.0, 1.0, 0.1, 1.0), DomainError);
}
