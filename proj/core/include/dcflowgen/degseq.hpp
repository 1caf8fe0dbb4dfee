#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dcflowgen/distribution.hpp"
#include "dcflowgen/layout.hpp"

namespace dcflowgen {

enum class DegreeKind { kIntra, kInter };

struct DegreeSequence {
  std::vector<std::uint32_t> degrees;
  DegreeKind kind = DegreeKind::kIntra;

  std::size_t size() const { return degrees.size(); }
  std::uint64_t sum() const;
};

// Simple undirected graph on nodes 0..n-1. Edges are stored as (a, b) with
// a < b, sorted and without duplicates.
class AdjacencyGraph {
 public:
  AdjacencyGraph() = default;
  explicit AdjacencyGraph(std::uint32_t n) : n_(n) {}
  // Throws dcflowgen::Error on self-loops, duplicates or out-of-range ids.
  AdjacencyGraph(std::uint32_t n,
                 std::vector<std::pair<NodeId, NodeId>> edges);

  std::uint32_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const std::pair<NodeId, NodeId>> edges() const { return edges_; }
  bool has_edge(NodeId a, NodeId b) const;
  std::vector<std::uint32_t> degrees() const;

  friend bool operator==(const AdjacencyGraph&,
                         const AdjacencyGraph&) = default;

 private:
  std::uint32_t n_ = 0;
  std::vector<std::pair<NodeId, NodeId>> edges_;
};

// Both conditions of the Erdos-Gallai theorem: even degree sum, and for
// every k, sum of the k largest <= k(k-1) + sum_{i>k} min(d_i, k).
bool erdos_gallai_check(std::span<const std::uint32_t> degrees);
inline bool erdos_gallai_check(const DegreeSequence& d) {
  return erdos_gallai_check(d.degrees);
}

// Havel-Hakimi construction: repeatedly connect the node with the largest
// residual degree to the next-largest ones (ties by lower node index).
// std::nullopt when the sequence is not graphical.
std::optional<AdjacencyGraph> havel_hakimi(const DegreeSequence& d);

// Exhaustive search over all 2^(n(n-1)/2) graphs; throws when n > max_n.
std::optional<AdjacencyGraph> brute_force_realize(const DegreeSequence& d,
                                                  std::uint32_t max_n = 7);

enum class InterRackBackend { kGreedy, kExact };

// Cross-rack graph with deg(i) <= d_i and as many edges as possible.
//   kGreedy: k-partite Havel-Hakimi (largest residual first, partners by
//            largest residual in other racks, ties by index), followed by
//            augmenting swaps that remove one edge and add two.
//   kExact:  branch and bound over all cross-rack pairs; small n only
//            (throws beyond exact_limit nodes).
AdjacencyGraph solve_inter_rack(const DegreeSequence& d,
                                const RackLayout& layout,
                                InterRackBackend backend =
                                    InterRackBackend::kGreedy,
                                std::uint32_t exact_limit = 14);

// sum_i max(0, d_i - deg(i)): demanded partners that could not be placed.
std::uint64_t degree_shortfall(const DegreeSequence& d,
                               const AdjacencyGraph& g);

struct IntraSolveReport {
  AdjacencyGraph graph;  // nodes are rack-local indices 0..m-1
  std::vector<std::uint32_t> penalties;
  double objective = 0.0;
};

// Weights 1 / Pr(d) for d = 0..max_degree read from the degree prior.
// Degrees with zero prior probability get the weight of the smallest
// positive probability found among 0..max_degree.
std::vector<double> penalty_weights(const StepDistribution& prior,
                                    std::uint32_t max_degree);

enum class IntraRackBackend { kAuto, kExact, kLocalSearch };

// Intra-rack graph minimizing sum_i |deg(i) - d_i| / Pr(d_i).
// The objective depends on the realized degree vector only, so the exact
// backend searches graphical degree vectors (Erdos-Gallai) in order of
// increasing cost and realizes the optimum with Havel-Hakimi. kAuto uses
// it for racks of at most 8 nodes and local search (edge toggles and
// augmenting swaps from a Havel-Hakimi start) above.
IntraSolveReport solve_intra_rack(const DegreeSequence& d,
                                  const StepDistribution& degree_prior,
                                  IntraRackBackend backend =
                                      IntraRackBackend::kAuto);

// Same objective with explicit weights (weights[d] for demanded degree d).
IntraSolveReport solve_intra_rack(const DegreeSequence& d,
                                  std::span<const double> weights,
                                  IntraRackBackend backend =
                                      IntraRackBackend::kAuto);

}  // namespace dcflowgen
