#include "dcflowgen/tm_generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dcflowgen/error.hpp"

namespace dcflowgen {
namespace {

std::uint32_t draw_count(const StepDistribution& dist, Rng& rng,
                         std::uint32_t cap) {
  const double v = std::floor(sample(dist, rng));
  if (!(v > 0.0)) return 0;
  return v >= static_cast<double>(cap) ? cap : static_cast<std::uint32_t>(v);
}

std::uint64_t draw_volume(const StepDistribution& dist, Rng& rng) {
  const double v = std::round(sample(dist, rng));
  return v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
}

}  // namespace

std::pair<DegreeSequence, DegreeSequence> sample_degrees(
    const TrafficProfile& profile, const RackLayout& layout, Rng& rng) {
  const std::uint32_t n = layout.node_count();
  DegreeSequence intra{std::vector<std::uint32_t>(n), DegreeKind::kIntra};
  DegreeSequence inter{std::vector<std::uint32_t>(n), DegreeKind::kInter};
  for (NodeId i = 0; i < n; ++i) {
    const std::uint32_t rack_size = layout.size_of_rack(layout.rack_of(i));
    intra.degrees[i] = draw_count(profile.partners_intra, rng, rack_size - 1);
  }
  for (NodeId i = 0; i < n; ++i) {
    const std::uint32_t rack_size = layout.size_of_rack(layout.rack_of(i));
    inter.degrees[i] = draw_count(profile.partners_inter, rng, n - rack_size);
  }
  return {std::move(intra), std::move(inter)};
}

TrafficMatrix build_tm(const TrafficProfile& profile, const RackLayout& layout,
                       Rng& rng, const TmGeneratorOptions& options,
                       double epoch_length, TmBuildDiagnostics* diag) {
  auto [intra, inter] = sample_degrees(profile, layout, rng);
  TmBuildDiagnostics local;
  TmBuildDiagnostics& dg = diag ? *diag : local;

  std::vector<std::pair<NodeId, NodeId>> intra_edges;
  for (std::uint32_t rack = 0; rack < layout.rack_count(); ++rack) {
    const NodeId base = layout.rack_begin(rack);
    DegreeSequence local_d{
        std::vector<std::uint32_t>(intra.degrees.begin() + base,
                                   intra.degrees.begin() + layout.rack_end(rack)),
        DegreeKind::kIntra};
    if (local_d.sum() == 0) continue;
    const auto rep = solve_intra_rack(local_d, profile.partners_intra,
                                      options.intra_backend);
    dg.intra_objective += rep.objective;
    for (const auto& [a, b] : rep.graph.edges()) {
      intra_edges.emplace_back(base + a, base + b);
    }
  }
  const auto inter_graph =
      solve_inter_rack(inter, layout, options.inter_backend);
  dg.inter_shortfall = degree_shortfall(inter, inter_graph);
  dg.intra_edges = intra_edges.size();
  dg.inter_edges = inter_graph.edge_count();

  std::vector<TmEntry> entries;
  entries.reserve(2 * (intra_edges.size() + inter_graph.edge_count()));
  auto emit = [&](NodeId a, NodeId b, const StepDistribution& vol) {
    if (options.direction == DirectionRule::kBothDirections) {
      const auto ab = draw_volume(vol, rng);
      const auto ba = draw_volume(vol, rng);
      entries.push_back({a, b, ab});
      entries.push_back({b, a, ba});
    } else {
      const bool flip = rng.below(2) == 1;
      const auto v = draw_volume(vol, rng);
      entries.push_back(flip ? TmEntry{b, a, v} : TmEntry{a, b, v});
    }
  };
  for (const auto& [a, b] : intra_edges) emit(a, b, profile.bytes_intra);
  for (const auto& [a, b] : inter_graph.edges()) {
    emit(a, b, profile.bytes_inter);
  }
  return TrafficMatrix::from_entries(layout, std::move(entries), epoch_length);
}

Sparsity pair_sparsity(const TrafficMatrix& tm) {
  const auto& layout = tm.layout();
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& e : tm.entries()) {
    pairs.emplace(std::min(e.src, e.dst), std::max(e.src, e.dst));
  }
  double intra_pairs = 0.0;
  for (std::uint32_t r = 0; r < layout.rack_count(); ++r) {
    const double s = layout.size_of_rack(r);
    intra_pairs += s * (s - 1.0) / 2.0;
  }
  const double n = layout.node_count();
  const double inter_pairs = n * (n - 1.0) / 2.0 - intra_pairs;
  double intra = 0.0;
  double inter = 0.0;
  for (const auto& [a, b] : pairs) {
    (layout.same_rack(a, b) ? intra : inter) += 1.0;
  }
  Sparsity s;
  s.intra = intra_pairs > 0.0 ? intra / intra_pairs : 0.0;
  s.inter = inter_pairs > 0.0 ? inter / inter_pairs : 0.0;
  return s;
}

}  // namespace dcflowgen
