#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dcflowgen/flowset.hpp"
#include "dcflowgen/rng.hpp"
#include "dcflowgen/traffic_matrix.hpp"

namespace dcflowgen {

struct MappedFlow {
  double start_time = 0.0;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t size = 0;

  friend bool operator==(const MappedFlow&, const MappedFlow&) = default;
};

enum class MapperStrategy { kDrr, kRandom };

struct DrrParams {
  double alpha = 0.1;
  double omega = 100.0;
};

// Draws a pair for every flow with probability proportional to the pair's
// remaining bytes; the chosen pair's weight drops by the flow size (floored
// at zero). Once every weight is exhausted the original TM entries are used
// again. Flows are processed in input order; output keeps that order.
std::vector<MappedFlow> map_random(std::span<const UnmappedFlow> flows,
                                   const TrafficMatrix& tm, Rng& rng);

// Deficit-round-robin assignment. Pairs (the nonzero TM entries, in TM
// order) form a ring with a persistent cursor; each pair has a residual R
// (initially its entry times s_F / s_M, the flow total over the TM total)
// and a credit C (initially 0). Flows are taken in a
// uniformly random order. For the flow at the head of the queue the pair at
// the cursor is inspected: if C >= size the flow goes there and C and R drop
// by the size (R floored at zero). Every inspection, successful or not, then
// raises C by max(alpha * R, omega), capped at R, and advances
// the cursor, so a pair takes at most one flow per lap. A flow larger than
// every cap first adds the original entries back onto all residuals.
// Output keeps input order.
std::vector<MappedFlow> map_drr(std::span<const UnmappedFlow> flows,
                                const TrafficMatrix& tm, Rng& rng,
                                const DrrParams& params = {});

// Reference implementation of map_drr that visits pairs one at a time. The
// production version jumps over whole ring laps in closed form; both give
// identical assignments (exercised by the tests). Quadratic in the worst
// case, intended for tests.
std::vector<MappedFlow> map_drr_stepwise(std::span<const UnmappedFlow> flows,
                                         const TrafficMatrix& tm, Rng& rng,
                                         const DrrParams& params = {});

std::vector<MappedFlow> map_flows(std::span<const UnmappedFlow> flows,
                                  const TrafficMatrix& tm, Rng& rng,
                                  MapperStrategy strategy,
                                  const DrrParams& params = {});

// Matrix of summed flow sizes per (src, dst).
TrafficMatrix realized_matrix(const TrafficMatrix& tm,
                              std::span<const MappedFlow> mapped);

// Topsoe distance between the TM and the realized matrix.
double mapping_quality(const TrafficMatrix& tm,
                       std::span<const MappedFlow> mapped);

}  // namespace dcflowgen
