#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dcflowgen/compare.hpp"
#include "dcflowgen/flowset.hpp"

namespace dcflowgen {
namespace {

StepDistribution bytes_mass(double v) {
  return StepDistribution::point_mass(v, SupportKind::kBytes);
}

TrafficMatrix single_entry(std::uint64_t bytes) {
  return TrafficMatrix::from_entries(RackLayout(2, 2), {{0, 1, bytes}});
}

TEST(CreateFlowset, DeterministicBalance) {
  Rng rng(1);
  const auto r = create_flowset(single_entry(10'000'000), bytes_mass(1000),
                                StepDistribution::point_mass(
                                    0.001, SupportKind::kSeconds),
                                rng);
  EXPECT_EQ(r.flows.size(), 10000u);
  EXPECT_EQ(r.s_f, 10'000'000u);
  EXPECT_DOUBLE_EQ(r.epsilon, 1.0);
  EXPECT_EQ(r.attempts, 1u);
}

TEST(CreateFlowset, DoubleVolumeHalvesTheGaps) {
  Rng rng(2);
  const auto r = create_flowset(single_entry(20'000'000), bytes_mass(1000),
                                StepDistribution::point_mass(
                                    0.001, SupportKind::kSeconds),
                                rng);
  EXPECT_NEAR(r.iat_scale, 0.5, 0.005);
  EXPECT_LE(std::abs(r.epsilon - 1.0), 0.01);
  EXPECT_EQ(r.s_m, 20'000'000u);
}

// Closed form: s_F is about (epoch / (scale * E[iat])) * E[size], so the
// accepted scale lands near epoch * E[size] / (s_M * E[iat]).
TEST(CreateFlowset, ScaleMatchesExpectation) {
  const StepDistribution size({{100, 0}, {20000, 1}}, SupportKind::kBytes);
  const StepDistribution iat({{0, 0}, {0.002, 1}}, SupportKind::kSeconds);
  const std::uint64_t s_m = 3'000'000'000;
  const double want = 10.0 * size.mean() / (static_cast<double>(s_m) * iat.mean());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto r = create_flowset(single_entry(s_m), size, iat, rng);
    EXPECT_LE(std::abs(r.epsilon - 1.0), 0.01);
    EXPECT_NEAR(r.iat_scale / want, 1.0, 0.03);
    EXPECT_LE(r.attempts, 10u);
    for (std::size_t i = 1; i < r.flows.size(); ++i) {
      ASSERT_LE(r.flows[i - 1].start_time, r.flows[i].start_time);
    }
    ASSERT_GT(r.flows.front().start_time, 0.0);
    ASSERT_LT(r.flows.back().start_time, 10.0);
  }
}

TEST(CreateFlowset, PooledSizesFollowInput) {
  const StepDistribution size({{100, 0}, {1000, 0.6}, {1e6, 1}},
                              SupportKind::kBytes);
  const StepDistribution iat({{0, 0}, {1e-4, 1}}, SupportKind::kSeconds);
  std::vector<double> pooled;
  for (std::uint64_t seed = 0; pooled.size() < 100000; ++seed) {
    Rng rng(seed);
    const auto r = create_flowset(single_entry(20'000'000'000), size, iat, rng);
    for (const auto& f : r.flows) pooled.push_back(static_cast<double>(f.size));
  }
  EXPECT_LT(ks_distance(empirical_cdf(pooled), size), 0.02);
}

TEST(CreateFlowset, ReportsBestAttemptOnFailure) {
  FlowsetOptions opt;
  opt.max_attempts = 1;
  Rng rng(3);
  try {
    create_flowset(single_entry(20'000'000), bytes_mass(1000),
                   StepDistribution::point_mass(0.001, SupportKind::kSeconds),
                   rng, opt);
    FAIL() << "expected FlowsetError";
  } catch (const FlowsetError& e) {
    EXPECT_EQ(e.stage(), "flowset");
    EXPECT_EQ(e.best_attempt().attempts, 1u);
    EXPECT_NEAR(e.best_attempt().epsilon, 2.0, 1e-3);
  }
}

TEST(CreateFlowset, RejectsEmptyMatrix) {
  Rng rng(4);
  const TrafficMatrix empty(RackLayout(2, 2));
  EXPECT_THROW(create_flowset(empty, bytes_mass(1),
                              StepDistribution::point_mass(
                                  1, SupportKind::kSeconds),
                              rng),
               Error);
}

}  // namespace
}  // namespace dcflowgen
