#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "dcflowgen/error.hpp"
#include "dcflowgen/validator.hpp"

namespace dcflowgen {
namespace {

const L2Model kL2{};

TEST(L2Model, DirectEvaluation) {
  EXPECT_EQ(kL2.payload_l2(0), 272u);
  EXPECT_EQ(kL2.ack_l2(0), 0u);
  EXPECT_EQ(kL2.payload_l2(1448), 272u + 1448u + 66u);
  EXPECT_EQ(kL2.payload_l2(1448), 1786u);
  EXPECT_EQ(kL2.ack_l2(1448), 66u);
  EXPECT_EQ(kL2.payload_l2(1449), 272u + 1449u + 132u);
  EXPECT_EQ(kL2.ack_l2(14480), 264u);
}

// payload_l2 strictly increases, so reading back an exact value returns the
// payload and anything in between rounds down.
TEST(L2Model, PayloadForL2InvertsTheModel) {
  for (std::uint64_t p = 1; p < 20000; ++p) {
    const auto y = kL2.payload_l2(p);
    ASSERT_EQ(kL2.payload_for_l2(static_cast<double>(y)), p);
    ASSERT_EQ(kL2.payload_for_l2(static_cast<double>(y) + 0.5), p);
    if (kL2.payload_l2(p + 1) > y + 1) {
      ASSERT_EQ(kL2.payload_for_l2(static_cast<double>(y + 1)), p);
    }
  }
  for (std::uint64_t p = 1; p < 1'000'000'000; p = p * 3 + 7) {
    ASSERT_EQ(kL2.payload_for_l2(static_cast<double>(kL2.payload_l2(p))), p);
  }
  EXPECT_EQ(kL2.payload_for_l2(10.0), 1u);
}

TEST(SynthesizeL2Tm, EmptyEpoch) {
  const std::vector<MappedFlow> none;
  EXPECT_TRUE(synthesize_l2_tm(none, kL2, RackLayout(4, 2)).empty());
}

TEST(SynthesizeL2Tm, OneFlowBothDirections) {
  const std::vector<MappedFlow> one{{0.5, 1, 3, 100000}};
  const auto tm = synthesize_l2_tm(one, kL2, RackLayout(4, 2));
  EXPECT_EQ(tm.at(1, 3), 272u + 100000u + 70u * 66u);
  EXPECT_EQ(tm.at(3, 1), 66u * 28u);
  EXPECT_EQ(tm.nonzero_count(), 2u);
}

TEST(SynthesizeL2Tm, ReverseTrafficAdds) {
  const std::vector<MappedFlow> two{{0.0, 0, 1, 1448}, {0.1, 1, 0, 0}};
  const auto tm = synthesize_l2_tm(two, kL2, RackLayout(2, 2));
  EXPECT_EQ(tm.at(0, 1), 1786u);
  EXPECT_EQ(tm.at(1, 0), 272u + 66u);
}

std::vector<std::vector<MappedFlow>> some_epochs() {
  std::vector<std::vector<MappedFlow>> epochs(3);
  std::uint64_t size = 1;
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    for (NodeId i = 0; i < 8; ++i) {
      for (NodeId j = 0; j < 8; ++j) {
        if (i == j || (i + j + e) % 3 != 0) continue;
        size = size * 7 % 100003;
        epochs[e].push_back({0.01 * (i + j), i, j, size});
      }
    }
  }
  return epochs;
}

ObservedProfile dummy_observed() {
  const auto b = StepDistribution({{1, 0}, {1e6, 1}}, SupportKind::kBytes);
  const auto c = StepDistribution({{0, 0.5}, {3, 1}}, SupportKind::kCount,
                                  Interpolation::kStep);
  const auto t = StepDistribution({{0, 0}, {1, 1}}, SupportKind::kSeconds);
  return {c, c, b, b, b, t};
}

TEST(Validate, SixChecksInOrderWithArrivalFlag) {
  const auto epochs = some_epochs();
  const auto rep = validate(epochs, dummy_observed(), kL2, RackLayout(8, 4));
  ASSERT_EQ(rep.checks.size(), 6u);
  const std::vector<std::string_view> names{
      kCheckBytesIntra, kCheckBytesInter, kCheckPartnersIntra,
      kCheckPartnersInter, kCheckFlowSizes, kCheckInterArrival};
  for (std::size_t k = 0; k < names.size(); ++k) {
    EXPECT_EQ(rep.checks[k].name, names[k]);
    EXPECT_EQ(rep.checks[k].expected_mismatch, k == 5);
  }
  EXPECT_EQ(rep.epochs, 3u);
  EXPECT_THROW(rep.check("nope"), Error);
  const std::vector<std::vector<MappedFlow>> none;
  EXPECT_THROW(validate(none, dummy_observed(), kL2, RackLayout(8, 4)), Error);
}

TEST(Validate, PartnersCountedOverUndirectedPairs) {
  // 0 -> 1 and 1 -> 0 are one partnership; 0 -> 2 crosses racks.
  const std::vector<std::vector<MappedFlow>> epochs{
      {{0.0, 0, 1, 10}, {0.0, 1, 0, 10}, {0.0, 0, 2, 10}}};
  const auto rep = validate(epochs, dummy_observed(), kL2, RackLayout(4, 2));
  const auto& intra = rep.check(kCheckPartnersIntra).generated;
  const auto& inter = rep.check(kCheckPartnersInter).generated;
  // Degrees intra (1,1,0,0), inter (1,0,1,0).
  EXPECT_DOUBLE_EQ(intra.cdf(0), 0.5);
  EXPECT_DOUBLE_EQ(inter.cdf(0), 0.5);
  EXPECT_DOUBLE_EQ(inter.cdf(1), 1.0);
}

TEST(Validate, SelfConsistentFixedPoint) {
  const auto epochs = some_epochs();
  const RackLayout l(8, 4);
  const auto first = validate(epochs, dummy_observed(), kL2, l);
  ObservedProfile own{first.check(kCheckPartnersIntra).generated,
                      first.check(kCheckPartnersInter).generated,
                      first.check(kCheckBytesIntra).generated,
                      first.check(kCheckBytesInter).generated,
                      first.check(kCheckFlowSizes).generated,
                      first.check(kCheckInterArrival).generated};
  const auto again = validate(epochs, own, kL2, l);
  for (const auto& c : again.checks) {
    EXPECT_EQ(c.report.ks_sup_distance, 0.0) << c.name;
  }
}

TEST(Validate, WritesReportFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "dcflowgen_report";
  std::filesystem::remove_all(dir);
  const auto rep = validate(some_epochs(), dummy_observed(), kL2,
                            RackLayout(8, 4));
  write_report(dir, rep);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  for (const auto& c : rep.checks) {
    EXPECT_TRUE(std::filesystem::exists(dir / (c.name + "_qq.csv")));
    EXPECT_TRUE(std::filesystem::exists(dir / (c.name + "_pp.csv")));
  }
  const auto j = to_json(rep);
  ASSERT_EQ(j.at("comparisons").size(), 6u);
  EXPECT_TRUE(j.at("comparisons")[5].at("expected_mismatch").get<bool>());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dcflowgen
