#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "dcflowgen/error.hpp"
#include "dcflowgen/rng.hpp"
#include "dcflowgen/schedule.hpp"

namespace dcflowgen {
namespace {

Schedule random_schedule(std::uint64_t seed, std::size_t flows) {
  Rng rng(seed);
  Schedule s;
  for (std::size_t i = 0; i < flows; ++i) {
    const auto src = static_cast<NodeId>(rng.below(1440));
    auto dst = static_cast<NodeId>(rng.below(1439));
    if (dst >= src) ++dst;
    // Awkward doubles on purpose: no short decimal form.
    s.flows.push_back({60.0 * rng.uniform01(), src, dst, rng.next_u64() >> 20});
  }
  std::sort(s.flows.begin(), s.flows.end(),
            [](const MappedFlow& a, const MappedFlow& b) {
              return a.start_time < b.start_time;
            });
  s.meta.seed = seed;
  s.meta.config_digest = "abc123";
  s.meta.tool_version = std::string(tool_version());
  s.meta.racks = 72;
  s.meta.hosts_per_rack = 20;
  s.meta.mapper = "drr";
  s.meta.epochs.push_back({0, flows, 123456789, 1.0 / 3.0, 0.7, 2, 1e-7});
  return s;
}

TEST(Schedule, RoundTripsExactly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = random_schedule(seed, 2000);
    EXPECT_EQ(parse_schedule(format_schedule(s)), s);
  }
  const auto empty = random_schedule(9, 0);
  EXPECT_EQ(parse_schedule(format_schedule(empty)), empty);
}

TEST(Schedule, FileRoundTrip) {
  const auto path =
      std::filesystem::temp_directory_path() / "dcflowgen_schedule.csv";
  const auto s = random_schedule(1, 100);
  write_schedule(path, s);
  EXPECT_EQ(read_schedule(path), s);
  std::filesystem::remove(path);
}

TEST(Schedule, WireFormat) {
  Schedule s;
  s.flows.push_back({0.000012, 17, 245, 1448});
  const auto text = format_schedule(s);
  EXPECT_EQ(text.substr(0, 3), "# {");
  EXPECT_NE(text.find("\nstart_seconds,src_id,dst_id,payload_bytes\n"
                      "1.2e-05,17,245,1448\n"),
            std::string::npos);
}

std::string error_of(const std::string& text) {
  try {
    parse_schedule(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(Schedule, ErrorsNameTheLine) {
  const auto head = format_schedule(random_schedule(3, 0));
  EXPECT_NE(error_of(head + "0.5,1,2\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of(head + "0.5,1,2,10\n0.4,1,2,10\n").find("line 4"),
            std::string::npos);
  EXPECT_NE(error_of(head + "0.5,1,1,10\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of(head + "0.5,1,x,10\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("start_seconds\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("# {\"seed\":1}\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of(""), "");
}

}  // namespace
}  // namespace dcflowgen
