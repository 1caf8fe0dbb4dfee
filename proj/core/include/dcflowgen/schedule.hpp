#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcflowgen/mapper.hpp"

namespace dcflowgen {

struct EpochMeta {
  std::size_t index = 0;
  std::size_t flows = 0;
  std::uint64_t tm_bytes = 0;
  double epsilon = 0.0;
  double iat_scale = 0.0;
  std::size_t attempts = 0;
  double topsoe = 0.0;

  friend bool operator==(const EpochMeta&, const EpochMeta&) = default;
};

struct ScheduleMeta {
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string tool_version;
  std::uint32_t racks = 0;
  std::uint32_t hosts_per_rack = 0;
  double epoch_length = 10.0;
  std::string mapper;
  std::vector<EpochMeta> epochs;

  friend bool operator==(const ScheduleMeta&, const ScheduleMeta&) = default;
};

// Payload transmissions of a whole run with absolute start times, sorted
// by (start_time, src, dst, size).
struct Schedule {
  std::vector<MappedFlow> flows;
  ScheduleMeta meta;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Wire format:
//   # {"seed":...,"config_digest":"...",...}      one-line JSON meta
//   start_seconds,src_id,dst_id,payload_bytes
//   0.000012,17,245,1448
// Times use the shortest decimal that reads back to the same double.
std::string format_schedule(const Schedule& s);
// Throws dcflowgen::Error naming the offending line.
Schedule parse_schedule(std::string_view text);

void write_schedule(const std::filesystem::path& path, const Schedule& s);
Schedule read_schedule(const std::filesystem::path& path);

nlohmann::json to_json(const ScheduleMeta& meta);
ScheduleMeta meta_from_json(const nlohmann::json& j);

std::string_view tool_version();

}  // namespace dcflowgen
