#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dcflowgen/compare.hpp"
#include "dcflowgen/error.hpp"
#include "dcflowgen/rng.hpp"

namespace dcflowgen {
namespace {

// Written out term by term, independent of the library's bookkeeping.
double topsoe_reference(std::vector<double> p, std::vector<double> q) {
  double sp = 0, sq = 0;
  for (double x : p) sp += x;
  for (double x : q) sq += x;
  double d = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double a = p[k] / sp, b = q[k] / sq;
    if (a > 0) d += a * std::log(2 * a / (a + b));
    if (b > 0) d += b * std::log(2 * b / (a + b));
  }
  return d;
}

TrafficMatrix random_5x5(Rng& rng) {
  std::vector<TmEntry> e;
  for (NodeId i = 0; i < 5; ++i) {
    for (NodeId j = 0; j < 5; ++j) {
      if (i != j && rng.below(3) != 0) e.push_back({i, j, 1 + rng.below(1000)});
    }
  }
  return TrafficMatrix::from_entries(RackLayout(5, 5), e);
}

TEST(Topsoe, IdentityIsZero) {
  Rng rng(1);
  const auto m = random_5x5(rng);
  EXPECT_DOUBLE_EQ(topsoe_distance(m, m), 0.0);
}

TEST(Topsoe, DisjointSupportsGiveTwoLn2) {
  const std::vector<double> p{1, 0, 0, 1}, q{0, 1, 1, 0};
  EXPECT_NEAR(topsoe_distance(p, q), 4 * 0.5 * std::log(2.0), 1e-12);
  EXPECT_NEAR(topsoe_distance(p, q), 1.3863, 5e-5);

  // The same two matrices, with nodes 0/1 and the off-diagonal cells.
  const RackLayout l(2, 2);
  const auto a = TrafficMatrix::from_entries(l, {{0, 1, 1}});
  const auto b = TrafficMatrix::from_entries(l, {{1, 0, 1}});
  EXPECT_NEAR(topsoe_distance(a, b), 2 * std::log(2.0), 1e-12);
}

TEST(Topsoe, SymmetricAndMatchesReference) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> p(25), q(25);
    for (auto& x : p) x = rng.below(4) == 0 ? 0.0 : rng.uniform01();
    for (auto& x : q) x = rng.below(4) == 0 ? 0.0 : rng.uniform01();
    p[0] = q[1] = 1.0;
    const double d = topsoe_distance(p, q);
    EXPECT_NEAR(d, topsoe_distance(q, p), 1e-12);
    EXPECT_NEAR(d, topsoe_reference(p, q), 1e-12);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2 * std::log(2.0) + 1e-12);
  }
  for (int t = 0; t < 20; ++t) {
    const auto a = random_5x5(rng), b = random_5x5(rng);
    EXPECT_NEAR(topsoe_distance(a, b), topsoe_distance(b, a), 1e-12);
  }
}

TEST(Topsoe, RejectsEmptyAndMismatched) {
  const std::vector<double> z{0, 0}, one{1, 0}, three{1, 1, 1};
  EXPECT_THROW(topsoe_distance(z, one), Error);
  EXPECT_THROW(topsoe_distance(one, three), Error);
}

TEST(Ks, ExactOnStepAndLinear) {
  const auto a = StepDistribution::point_mass(1.0, SupportKind::kBytes);
  const auto b = StepDistribution::point_mass(2.0, SupportKind::kBytes);
  EXPECT_DOUBLE_EQ(ks_distance(a, b), 1.0);

  const StepDistribution u({{0, 0}, {1, 1}}, SupportKind::kBytes);
  const StepDistribution v({{0, 0}, {2, 1}}, SupportKind::kBytes);
  EXPECT_DOUBLE_EQ(ks_distance(u, v), 0.5);
  // Atom against a continuous law: the jump is seen from both sides.
  const auto half = StepDistribution::point_mass(0.5, SupportKind::kBytes);
  EXPECT_DOUBLE_EQ(ks_distance(u, half), 0.5);
}

TEST(Compare, SelfComparisonIsOnTheDiagonal) {
  const StepDistribution d({{0, 0}, {10, 0.4}, {100, 1}}, SupportKind::kBytes);
  const auto r = compare(d, d, 51);
  EXPECT_DOUBLE_EQ(r.ks_sup_distance, 0.0);
  EXPECT_NEAR(r.topsoe, 0.0, 1e-12);
  ASSERT_EQ(r.qq_points.size(), 51u);
  for (const auto& [x, y] : r.qq_points) EXPECT_DOUBLE_EQ(x, y);
  for (const auto& [x, y] : r.pp_points) EXPECT_DOUBLE_EQ(x, y);
}

TEST(Compare, PointMassesAreFullyApart) {
  const auto a = StepDistribution::point_mass(1.0, SupportKind::kBytes);
  const auto b = StepDistribution::point_mass(2.0, SupportKind::kBytes);
  EXPECT_DOUBLE_EQ(compare(a, b).ks_sup_distance, 1.0);
}

TEST(Compare, TwoSamplesOfOneLaw) {
  const StepDistribution d({{0, 0}, {10, 0.4}, {1e4, 1}}, SupportKind::kBytes);
  Rng r1(1), r2(2);
  std::vector<double> a(100000), b(100000);
  for (auto& x : a) x = sample(d, r1);
  for (auto& x : b) x = sample(d, r2);
  const auto rep = compare(empirical_cdf(a), empirical_cdf(b));
  EXPECT_LT(rep.ks_sup_distance, 0.02);
  EXPECT_LT(rep.topsoe, 0.01);
}

}  // namespace
}  // namespace dcflowgen
