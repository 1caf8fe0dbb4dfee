#include "dcflowgen/payload_extractor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "dcflowgen/error.hpp"

namespace dcflowgen {

std::uint64_t ack_flow_size(std::uint64_t payload, const AckModel& model) {
  const double per_ack = model.mss * model.r;
  const auto acks =
      static_cast<std::uint64_t>(std::ceil(static_cast<double>(payload) /
                                           per_ack));
  return acks * static_cast<std::uint64_t>(std::llround(model.ack_packet_size));
}

void FlowSizePMF::validate() const {
  if (entries.empty()) throw Error("flow size pmf", "no entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].prob >= 0.0)) {
      throw Error("flow size pmf", "negative probability at index " +
                                       std::to_string(i));
    }
    if (i > 0 && entries[i].size <= entries[i - 1].size) {
      throw Error("flow size pmf", "sizes not strictly increasing at index " +
                                       std::to_string(i));
    }
  }
  if (std::abs(total() - 1.0) > 1e-9) {
    throw Error("flow size pmf", "probabilities do not sum to 1");
  }
}

double FlowSizePMF::total() const {
  double t = 0.0;
  for (const auto& e : entries) t += e.prob;
  return t;
}

StepDistribution FlowSizePMF::to_distribution() const {
  std::vector<CdfPoint> pts;
  pts.reserve(entries.size());
  double cum = 0.0;
  for (const auto& e : entries) {
    cum += e.prob;
    if (e.prob <= 0.0 && !pts.empty()) continue;
    pts.push_back({static_cast<double>(e.size), std::min(cum, 1.0)});
  }
  pts.back().cum_prob = 1.0;
  return StepDistribution(std::move(pts), SupportKind::kBytes,
                          Interpolation::kStep);
}

FlowSizePMF discretize_flow_sizes(const StepDistribution& s_obs,
                                  const AckModel& model,
                                  double geometric_step) {
  model.validate();
  if (!(geometric_step > 0.0)) {
    throw Error("payload extractor", "geometric_step must be positive");
  }
  const auto top = static_cast<std::uint64_t>(std::ceil(s_obs.max_value()));
  const auto unit = static_cast<std::uint64_t>(std::llround(model.ack_packet_size));
  const std::uint64_t ack_top = ack_flow_size(top, model);

  std::vector<std::uint64_t> lattice;
  for (std::uint64_t v = unit; v <= std::min(ack_top, top); v += unit) {
    lattice.push_back(v);
  }
  double g = lattice.empty() ? static_cast<double>(unit)
                             : static_cast<double>(lattice.back());
  while (true) {
    g *= 1.0 + geometric_step;
    const auto v = static_cast<std::uint64_t>(std::llround(g));
    if (v >= top) break;
    if (lattice.empty() || v > lattice.back()) lattice.push_back(v);
  }
  if (lattice.empty() || lattice.back() < top) lattice.push_back(top);

  FlowSizePMF pmf;
  pmf.model = model;
  double prev = 0.0;
  for (std::uint64_t v : lattice) {
    const double c = s_obs.cdf(static_cast<double>(v));
    if (c > prev) pmf.entries.push_back({v, c - prev});
    prev = std::max(prev, c);
  }
  // The lattice starts at one ACK packet; an atom below it (if any) was
  // folded into the first bin above.
  const double t = pmf.total();
  for (auto& e : pmf.entries) e.prob /= t;
  return pmf;
}

FlowSizePMF infer_payload_sizes(const FlowSizePMF& obs,
                                ExtractionDiagnostics* diag) {
  if (obs.entries.empty()) {
    throw Error("payload extractor", "empty flow-size distribution");
  }
  obs.model.validate();
  ExtractionDiagnostics local;
  ExtractionDiagnostics& d = diag ? *diag : local;

  std::map<std::uint64_t, double, std::greater<>> pl;
  for (const auto& e : obs.entries) pl[e.size] += e.prob;

  for (auto it = pl.begin(); it != pl.end(); ++it) {
    const std::uint64_t x = it->first;
    if (it->second < 0.0) {
      ++d.clamped_bins;
      d.clamped_mass += -it->second;
      it->second = 0.0;
    }
    const double p = it->second;
    const std::uint64_t a = ack_flow_size(x, obs.model);
    if (a > x) continue;
    if (a == x) {
      ++d.fixed_points;
      d.warnings.push_back("size " + std::to_string(x) +
                           " is its own ACK flow size; its mass cancels");
      it->second = 0.0;
      continue;
    }
    // a < x: the target bin lies ahead in descending order and has not
    // been read yet, so a single pass is enough.
    pl[a] -= p;
  }

  FlowSizePMF out;
  out.model = obs.model;
  double total = 0.0;
  for (auto it = pl.rbegin(); it != pl.rend(); ++it) {
    if (it->second > 0.0) {
      out.entries.push_back({it->first, it->second});
      total += it->second;
    }
  }
  if (!(total > 0.0)) {
    d.warnings.push_back(
        "all mass cancelled against implied ACK flows; returning input");
    FlowSizePMF copy = obs;
    const double t = copy.total();
    for (auto& e : copy.entries) e.prob /= t;
    return copy;
  }
  for (auto& e : out.entries) e.prob /= total;
  return out;
}

StepDistribution implied_l2_flow_sizes(const FlowSizePMF& pl,
                                       double pl_ack_split) {
  if (!(pl_ack_split > 0.0 && pl_ack_split < 1.0)) {
    throw Error("payload extractor", "pl_ack_split must lie in (0, 1)");
  }
  if (pl.entries.empty()) {
    throw Error("payload extractor", "empty flow-size distribution");
  }
  std::map<std::uint64_t, double> mix;
  const double t = pl.total();
  for (const auto& e : pl.entries) {
    const double p = e.prob / t;
    mix[e.size] += pl_ack_split * p;
    mix[ack_flow_size(e.size, pl.model)] += (1.0 - pl_ack_split) * p;
  }
  std::vector<CdfPoint> pts;
  pts.reserve(mix.size());
  double cum = 0.0;
  for (const auto& [size, p] : mix) {
    cum += p;
    if (p <= 0.0) continue;
    pts.push_back({static_cast<double>(size), std::min(cum, 1.0)});
  }
  pts.back().cum_prob = 1.0;
  return StepDistribution(std::move(pts), SupportKind::kBytes,
                          Interpolation::kStep);
}

}  // namespace dcflowgen
