#include <gtest/gtest.h>

#include <vector>

#include "dcflowgen/compare.hpp"
#include "dcflowgen/tm_generator.hpp"

namespace dcflowgen {
namespace {

StepDistribution count_mass(double v) {
  return StepDistribution::point_mass(v, SupportKind::kCount);
}
StepDistribution bytes_mass(double v) {
  return StepDistribution::point_mass(v, SupportKind::kBytes);
}

TrafficProfile point_profile(double n_intra, double n_inter, double b_intra,
                             double b_inter) {
  return {count_mass(n_intra), count_mass(n_inter), bytes_mass(b_intra),
          bytes_mass(b_inter), bytes_mass(1000), bytes_mass(0.001),
          AckModel{}};
}

StepDistribution profile_file(const char* name, SupportKind kind) {
  return read_distribution_csv(std::string(DCFLOWGEN_PROFILE_DIR "/") + name,
                               kind);
}

TEST(TrafficMatrix, FromEntriesMergesAndSorts) {
  const RackLayout l(4, 2);
  const auto tm = TrafficMatrix::from_entries(
      l, {{2, 1, 5}, {0, 1, 3}, {2, 1, 7}, {3, 0, 0}});
  ASSERT_EQ(tm.nonzero_count(), 2u);
  EXPECT_EQ(tm.entries()[0], (TmEntry{0, 1, 3}));
  EXPECT_EQ(tm.entries()[1], (TmEntry{2, 1, 12}));
  EXPECT_EQ(tm.at(2, 1), 12u);
  EXPECT_EQ(tm.at(1, 2), 0u);
  EXPECT_EQ(tm.total_bytes(), 15u);
  EXPECT_ANY_THROW(TrafficMatrix::from_entries(l, {{1, 1, 5}}));
  EXPECT_ANY_THROW(TrafficMatrix::from_entries(l, {{0, 4, 5}}));
}

TEST(RackLayout, RemainderRack) {
  const RackLayout l(7, 3);
  EXPECT_EQ(l.rack_count(), 3u);
  EXPECT_EQ(l.size_of_rack(2), 1u);
  EXPECT_TRUE(l.same_rack(3, 5));
  EXPECT_FALSE(l.same_rack(2, 3));
}

TEST(SampleDegrees, PointMassZero) {
  Rng rng(1);
  const auto [intra, inter] =
      sample_degrees(point_profile(0, 0, 1, 1), RackLayout(40, 20), rng);
  EXPECT_EQ(intra.sum(), 0u);
  EXPECT_EQ(inter.sum(), 0u);
}

TEST(SampleDegrees, ClippedToRackAndRest) {
  Rng rng(2);
  const auto [intra, inter] =
      sample_degrees(point_profile(50, 5000, 1, 1), RackLayout(60, 20), rng);
  for (auto d : intra.degrees) EXPECT_EQ(d, 19u);
  for (auto d : inter.degrees) EXPECT_EQ(d, 40u);
}

TEST(SampleDegrees, InterDrawsFollowObservedLaw) {
  auto p = point_profile(0, 0, 1, 1);
  p.partners_inter = profile_file("partners_inter_obs.csv", SupportKind::kCount);
  p.partners_intra = profile_file("partners_intra_obs.csv", SupportKind::kCount);
  const RackLayout l(1440, 20);
  Rng rng(3);
  std::vector<double> xs;
  while (xs.size() < 100000) {
    const auto [intra, inter] = sample_degrees(p, l, rng);
    for (auto d : intra.degrees) ASSERT_LE(d, 19u);
    for (auto d : inter.degrees) xs.push_back(d);
  }
  EXPECT_LT(ks_distance(empirical_cdf(xs, SupportKind::kCount),
                        p.partners_inter),
            0.02);
}

TEST(BuildTm, ZeroDegreesGiveEmptyMatrix) {
  Rng rng(4);
  const auto tm = build_tm(point_profile(0, 0, 10, 10), RackLayout(40, 20), rng);
  EXPECT_TRUE(tm.empty());
}

TEST(BuildTm, ForcedSingleInterEdgeOneDirection) {
  // Two racks of one node, each wanting one partner outside its rack.
  const RackLayout l(2, 1);
  TmGeneratorOptions opt;
  opt.direction = DirectionRule::kOneDirection;
  int forward = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto tm = build_tm(point_profile(0, 1, 5, 1e6), l, rng, opt);
    ASSERT_EQ(tm.nonzero_count(), 1u);
    EXPECT_EQ(tm.entries()[0].bytes, 1'000'000u);
    forward += tm.entries()[0].src == 0;
  }
  EXPECT_NEAR(forward, 100, 30);
}

TEST(BuildTm, BothDirectionsDrawTwoVolumes) {
  const RackLayout l(4, 2);
  Rng rng(5);
  TmBuildDiagnostics diag;
  const auto tm = build_tm(point_profile(1, 1, 500, 7000), l, rng, {}, 10.0,
                           &diag);
  EXPECT_EQ(diag.intra_edges, 2u);
  EXPECT_EQ(diag.inter_edges, 2u);
  EXPECT_EQ(diag.inter_shortfall, 0u);
  ASSERT_EQ(tm.nonzero_count(), 8u);
  for (const auto& e : tm.entries()) {
    EXPECT_EQ(e.bytes, l.same_rack(e.src, e.dst) ? 500u : 7000u);
    EXPECT_EQ(tm.at(e.dst, e.src), e.bytes);
  }
  const auto s = pair_sparsity(tm);
  EXPECT_DOUBLE_EQ(s.intra, 1.0);
  EXPECT_DOUBLE_EQ(s.inter, 0.5);
}

TEST(BuildTm, SameSeedSameMatrix) {
  auto p = point_profile(0, 0, 1, 1);
  p.partners_inter = profile_file("partners_inter_obs.csv", SupportKind::kCount);
  p.partners_intra = profile_file("partners_intra_obs.csv", SupportKind::kCount);
  p.bytes_inter = profile_file("tm_bytes_inter_obs.csv", SupportKind::kBytes);
  p.bytes_intra = profile_file("tm_bytes_intra_obs.csv", SupportKind::kBytes);
  const RackLayout l(200, 20);
  Rng a(6), b(6);
  EXPECT_EQ(build_tm(p, l, a), build_tm(p, l, b));
}

}  // namespace
}  // namespace dcflowgen
