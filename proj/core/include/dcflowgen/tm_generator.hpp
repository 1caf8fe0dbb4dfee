#pragma once

#include <cstdint>
#include <utility>

#include "dcflowgen/ack_model.hpp"
#include "dcflowgen/degseq.hpp"
#include "dcflowgen/distribution.hpp"
#include "dcflowgen/rng.hpp"
#include "dcflowgen/traffic_matrix.hpp"

namespace dcflowgen {

// The distributions consumed by traffic-matrix and flow generation.
// Partner counts are observed values; byte volumes and flow sizes are
// payload (Layer-4) quantities; inter-arrival times are the observed ones.
struct TrafficProfile {
  StepDistribution partners_intra;
  StepDistribution partners_inter;
  StepDistribution bytes_intra;
  StepDistribution bytes_inter;
  StepDistribution flow_sizes;
  StepDistribution inter_arrival;
  AckModel model;
};

// How an undirected communication edge becomes directed TM entries.
//   kBothDirections: (i,j) and (j,i) each get an independent volume.
//   kOneDirection:   one volume on a direction chosen uniformly at random.
enum class DirectionRule { kBothDirections, kOneDirection };

struct TmGeneratorOptions {
  DirectionRule direction = DirectionRule::kBothDirections;
  IntraRackBackend intra_backend = IntraRackBackend::kAuto;
  InterRackBackend inter_backend = InterRackBackend::kGreedy;
};

struct TmBuildDiagnostics {
  std::uint64_t inter_shortfall = 0;  // demanded inter partners left unmet
  double intra_objective = 0.0;       // summed over racks
  std::size_t intra_edges = 0;
  std::size_t inter_edges = 0;
};

// Per-node partner counts: intra drawn from partners_intra and clipped to
// [0, rack size - 1], inter drawn from partners_inter and clipped to
// [0, n - rack size]. All intra draws come first, then all inter draws.
std::pair<DegreeSequence, DegreeSequence> sample_degrees(
    const TrafficProfile& profile, const RackLayout& layout, Rng& rng);

// One epoch of payload traffic: sample degrees, realize the intra-rack
// graph rack by rack and the inter-rack graph, then draw a volume for
// every edge (intra edges first, rack by rack, then inter edges; each in
// sorted edge order).
TrafficMatrix build_tm(const TrafficProfile& profile, const RackLayout& layout,
                       Rng& rng, const TmGeneratorOptions& options = {},
                       double epoch_length = 10.0,
                       TmBuildDiagnostics* diag = nullptr);

// Fraction of unordered same-rack (or cross-rack) node pairs with traffic
// in at least one direction.
struct Sparsity {
  double intra = 0.0;
  double inter = 0.0;
};
Sparsity pair_sparsity(const TrafficMatrix& tm);

}  // namespace dcflowgen
