#include <gtest/gtest.h>

#include <vector>

#include "dcflowgen/compare.hpp"
#include "dcflowgen/distribution.hpp"
#include "dcflowgen/error.hpp"
#include "dcflowgen/rng.hpp"

namespace dcflowgen {
namespace {

StepDistribution three_steps() {
  return StepDistribution({{10.0, 0.2}, {20.0, 0.7}, {35.0, 1.0}},
                          SupportKind::kBytes, Interpolation::kStep);
}

TEST(StepDistribution, RejectsBrokenInvariants) {
  EXPECT_THROW(StepDistribution({}, SupportKind::kBytes), Error);
  EXPECT_THROW(StepDistribution({{1.0, 0.5}, {1.0, 1.0}}, SupportKind::kBytes),
               Error);
  EXPECT_THROW(StepDistribution({{1.0, 0.6}, {2.0, 0.5}, {3.0, 1.0}},
                                SupportKind::kBytes),
               Error);
  EXPECT_THROW(StepDistribution({{-1.0, 0.5}, {2.0, 1.0}}, SupportKind::kBytes),
               Error);
  EXPECT_THROW(StepDistribution({{1.0, 0.5}, {2.0, 0.9}}, SupportKind::kBytes),
               Error);
  EXPECT_NO_THROW(
      StepDistribution({{1.0, 0.5}, {2.0, 1.0 - 1e-12}}, SupportKind::kBytes));
}

TEST(StepDistribution, DegenerateCdfAlwaysSamples42) {
  const StepDistribution d({{42.0, 0.0}, {42.5, 1.0}}, SupportKind::kBytes,
                           Interpolation::kStep);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(sample(d, rng), 42.5);
  }
  const auto pm = StepDistribution::point_mass(42.0, SupportKind::kBytes);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(sample(pm, rng), 42.0);
}

TEST(StepDistribution, UniformQuantileAtHalf) {
  const StepDistribution u({{0.0, 0.0}, {100.0, 1.0}}, SupportKind::kBytes);
  EXPECT_DOUBLE_EQ(u.quantile(0.5), 50.0);
  EXPECT_DOUBLE_EQ(u.cdf(25.0), 0.25);
  EXPECT_DOUBLE_EQ(u.mean(), 50.0);
}

TEST(StepDistribution, StepSemantics) {
  const auto d = three_steps();
  EXPECT_DOUBLE_EQ(d.cdf(9.9), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(10.0), 0.2);
  EXPECT_DOUBLE_EQ(d.cdf(19.9), 0.2);
  EXPECT_DOUBLE_EQ(d.cdf_left(20.0), 0.2);
  EXPECT_DOUBLE_EQ(d.cdf(20.0), 0.7);
  EXPECT_DOUBLE_EQ(d.probability_at(20.0), 0.5);
  EXPECT_DOUBLE_EQ(d.quantile(0.0), 10.0);
  EXPECT_DOUBLE_EQ(d.quantile(0.2), 20.0);
  EXPECT_DOUBLE_EQ(d.quantile(0.69), 20.0);
  EXPECT_DOUBLE_EQ(d.quantile(0.99), 35.0);
  EXPECT_DOUBLE_EQ(d.mean(), 0.2 * 10 + 0.5 * 20 + 0.3 * 35);
}

TEST(EmpiricalCdf, Counting) {
  const std::vector<double> one{5.0};
  const auto a = empirical_cdf(one);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.points()[0], (CdfPoint{5.0, 1.0}));

  const std::vector<double> three{3.0, 1.0, 1.0};
  const auto b = empirical_cdf(three);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_DOUBLE_EQ(b.points()[0].value, 1.0);
  EXPECT_DOUBLE_EQ(b.points()[0].cum_prob, 2.0 / 3.0);
  EXPECT_EQ(b.points()[1], (CdfPoint{3.0, 1.0}));
}

TEST(EmpiricalCdf, MonteCarloRoundTripStep) {
  const auto d = three_steps();
  Rng rng(11);
  std::vector<double> xs(1'000'000);
  for (auto& x : xs) x = sample(d, rng);
  EXPECT_LT(ks_distance(empirical_cdf(xs), d), 0.01);
}

TEST(EmpiricalCdf, MonteCarloRoundTripLinear) {
  const StepDistribution d({{0.0, 0.0}, {10.0, 0.3}, {1000.0, 0.9},
                            {1e6, 1.0}},
                           SupportKind::kBytes);
  Rng rng(12);
  std::vector<double> xs(1'000'000);
  for (auto& x : xs) x = sample(d, rng);
  EXPECT_LT(ks_distance(empirical_cdf(xs), d), 0.01);
}

TEST(RestrictAbove, RenormalizesTail) {
  const StepDistribution u({{0.0, 0.0}, {100.0, 1.0}}, SupportKind::kBytes);
  const auto r = restrict_above(u, 40.0);
  EXPECT_DOUBLE_EQ(r.cdf(40.0), 0.0);
  EXPECT_NEAR(r.cdf(70.0), 0.5, 1e-12);
  EXPECT_THROW(restrict_above(u, 100.0), Error);
}

TEST(DistributionCsv, ParsesCommentsHeaderAndRoundTrips) {
  const auto d = parse_distribution_csv(
      "# observed\nvalue,cum_prob\n1, 0.25\n2,0.5\r\n\n4,1\n",
      SupportKind::kCount, Interpolation::kStep);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d.cdf(2.0), 0.5);
  const auto back = parse_distribution_csv(format_distribution_csv(d),
                                           SupportKind::kCount,
                                           Interpolation::kStep);
  EXPECT_EQ(back, d);
  EXPECT_THROW(parse_distribution_csv("1,0.5\nx,1\n", SupportKind::kBytes,
                                      Interpolation::kLinear),
               Error);
  EXPECT_THROW(parse_distribution_csv("2,0.5\n1,1\n", SupportKind::kBytes,
                                      Interpolation::kLinear),
               Error);
}

TEST(Rng, DerivedStreamsAreReproducibleAndDistinct) {
  Rng a = derive_stream(7, Stream::kFlowset, 3);
  Rng b = derive_stream(7, Stream::kFlowset, 3);
  Rng c = derive_stream(7, Stream::kFlowset, 4);
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
}

TEST(Rng, MersenneTwisterReferenceValue) {
  // 10000th output of a default-seeded mt19937_64, fixed by the C++ standard.
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, BelowIsUniform) {
  Rng rng(99);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_NEAR(c, n / 7, 400);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace dcflowgen
