#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dcflowgen/ack_model.hpp"
#include "dcflowgen/distribution.hpp"

namespace dcflowgen {

struct PmfEntry {
  std::uint64_t size = 0;
  double prob = 0.0;

  friend bool operator==(const PmfEntry&, const PmfEntry&) = default;
};

// Probability mass function over flow sizes in bytes, sizes strictly
// increasing. Built from a StepDistribution by discretize_flow_sizes or
// directly from entries.
struct FlowSizePMF {
  std::vector<PmfEntry> entries;
  AckModel model;

  // Throws dcflowgen::Error unless sizes strictly increase, probabilities
  // are non-negative and they sum to 1 within 1e-9.
  void validate() const;
  double total() const;
  StepDistribution to_distribution() const;
};

struct ExtractionDiagnostics {
  std::size_t clamped_bins = 0;  // bins read with a negative mass
  double clamped_mass = 0.0;     // total negative mass discarded
  std::size_t fixed_points = 0;  // sizes with ACK(x) == x
  std::vector<std::string> warnings;
};

// Discretizes a flow-size distribution onto sizes where implied ACK flows
// can land: every multiple of the ACK packet size up to ACK(max), then a
// geometric grid (ratio 1 + geometric_step) up to max. Each lattice point
// receives the probability of the interval ending at it.
FlowSizePMF discretize_flow_sizes(const StepDistribution& s_obs,
                                  const AckModel& model,
                                  double geometric_step = 0.002);

// Removes the ACK flows implied by every flow size, largest first:
//   Pr(ACK(x)) -= Pr(x)
// A bin is clamped to zero when it is read with negative mass. Sizes whose
// ACK flow would be larger than themselves (x below one ACK packet) are left
// untouched; fixed points ACK(x) == x cancel themselves. If everything
// cancels, the input is returned unchanged and a warning recorded.
FlowSizePMF infer_payload_sizes(const FlowSizePMF& obs,
                                ExtractionDiagnostics* diag = nullptr);

// Mixture pl_ack_split * pl + (1 - pl_ack_split) * ACK(pl): the Layer-2
// flow sizes implied by payload flows drawn from pl, each answered by one
// ACK flow when the split is 0.5.
StepDistribution implied_l2_flow_sizes(const FlowSizePMF& pl,
                                       double pl_ack_split = 0.5);

}  // namespace dcflowgen
