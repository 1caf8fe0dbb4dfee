#pragma once

#include <cstdint>
#include <vector>

#include "dcflowgen/distribution.hpp"
#include "dcflowgen/error.hpp"
#include "dcflowgen/rng.hpp"
#include "dcflowgen/traffic_matrix.hpp"

namespace dcflowgen {

struct UnmappedFlow {
  double start_time = 0.0;  // seconds from the start of the epoch
  std::uint64_t size = 0;   // payload bytes

  friend bool operator==(const UnmappedFlow&, const UnmappedFlow&) = default;
};

struct FlowsetResult {
  std::vector<UnmappedFlow> flows;  // sorted by start_time
  std::uint64_t s_f = 0;            // total flow bytes
  std::uint64_t s_m = 0;            // TM total bytes
  double epsilon = 0.0;             // s_m / s_f
  double iat_scale = 1.0;           // factor applied to inter-arrival draws
  std::size_t attempts = 0;
};

class FlowsetError : public Error {
 public:
  FlowsetError(const std::string& what, FlowsetResult best)
      : Error("flowset", what), best_(std::move(best)) {}
  const FlowsetResult& best_attempt() const { return best_; }

 private:
  FlowsetResult best_;
};

struct FlowsetOptions {
  double tolerance = 0.01;
  std::size_t max_attempts = 50;
  double initial_iat_scale = 1.0;
};

// Draws arrivals as cumulative sums of scaled inter-arrival draws (the
// first one arrives one draw after 0) until the epoch ends, and one payload
// size per arrival. While |s_m / s_f - 1| > tolerance the whole set is
// redrawn with iat_scale multiplied by s_f / s_m. Throws FlowsetError
// (carrying the attempt with the smallest |epsilon - 1|) after
// max_attempts.
FlowsetResult create_flowset(const TrafficMatrix& tm,
                             const StepDistribution& s_pl,
                             const StepDistribution& iat, Rng& rng,
                             const FlowsetOptions& options = {});

}  // namespace dcflowgen
