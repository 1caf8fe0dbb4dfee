#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcflowgen/ack_model.hpp"
#include "dcflowgen/compare.hpp"
#include "dcflowgen/distribution.hpp"
#include "dcflowgen/mapper.hpp"
#include "dcflowgen/traffic_matrix.hpp"

namespace dcflowgen {

// Analytic Layer-2 byte accounting for one TCP connection carrying p
// payload bytes:
//   payload direction: handshake_overhead + p + ceil(p / mss) * per_packet_header
//   ACK direction:     ack_handshake_overhead + ACK(p)
struct L2Model {
  AckModel ack;
  double handshake_overhead = 272.0;
  double per_packet_header = 66.0;
  double ack_handshake_overhead = 0.0;

  std::uint64_t payload_l2(std::uint64_t payload) const;
  std::uint64_t ack_l2(std::uint64_t payload) const;
  // Largest payload whose payload-direction size does not exceed l2_bytes,
  // and at least 1.
  std::uint64_t payload_for_l2(double l2_bytes) const;
};

struct L2FlowSizes {
  std::vector<std::uint64_t> payload_l2;
  std::vector<std::uint64_t> ack_l2;
};

L2FlowSizes l2_flow_sizes(std::span<const MappedFlow> flows,
                          const L2Model& model);

// TM(i,j) = sum of payload-direction sizes of flows i -> j
//         + sum of ACK-direction sizes of flows j -> i.
TrafficMatrix synthesize_l2_tm(std::span<const MappedFlow> epoch_flows,
                               const L2Model& model, const RackLayout& layout,
                               double epoch_length = 10.0);

// Observed Layer-2 distributions the generated traffic is compared with.
struct ObservedProfile {
  StepDistribution partners_intra;
  StepDistribution partners_inter;
  StepDistribution bytes_intra;
  StepDistribution bytes_inter;
  StepDistribution flow_sizes;
  StepDistribution inter_arrival;
};

struct DistributionCheck {
  std::string name;
  StepDistribution generated;
  StepDistribution observed;
  ComparisonReport report;
  // Set for inter-arrival times: payload-flow arrivals are drawn from the
  // observed Layer-2 distribution and the ACK flows start with their payload
  // flows, so the generated Layer-2 gaps are not expected to match.
  bool expected_mismatch = false;
};

struct ValidationReport {
  std::vector<DistributionCheck> checks;
  std::size_t epochs = 0;
  std::size_t flows = 0;

  // Throws dcflowgen::Error for an unknown name.
  const DistributionCheck& check(std::string_view name) const;
};

// Check names, in report order.
inline constexpr std::string_view kCheckBytesIntra = "bytes_intra";
inline constexpr std::string_view kCheckBytesInter = "bytes_inter";
inline constexpr std::string_view kCheckPartnersIntra = "partners_intra";
inline constexpr std::string_view kCheckPartnersInter = "partners_inter";
inline constexpr std::string_view kCheckFlowSizes = "flow_sizes";
inline constexpr std::string_view kCheckInterArrival = "inter_arrival";

// Builds the six generated distributions from the per-epoch schedules:
// partner counts per node (all nodes, either direction) and nonzero entries
// of every epoch's synthesized TM, split intra/inter; Layer-2 flow sizes of
// both directions; gaps between consecutive Layer-2 flow starts per epoch.
ValidationReport validate(std::span<const std::vector<MappedFlow>> epochs,
                          const ObservedProfile& observed,
                          const L2Model& model, const RackLayout& layout,
                          double epoch_length = 10.0,
                          std::size_t n_points = 101);

nlohmann::json to_json(const ValidationReport& report);

// report.json plus <name>_qq.csv and <name>_pp.csv per check.
void write_report(const std::filesystem::path& dir,
                  const ValidationReport& report);

}  // namespace dcflowgen
