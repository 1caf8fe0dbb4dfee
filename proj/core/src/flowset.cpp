#include "dcflowgen/flowset.hpp"

#include <cmath>

namespace dcflowgen {
namespace {

FlowsetResult draw_once(double epoch_length, const StepDistribution& s_pl,
                        const StepDistribution& iat, double iat_scale,
                        Rng& rng) {
  FlowsetResult r;
  r.iat_scale = iat_scale;
  double t = 0.0;
  while (true) {
    t += iat_scale * sample(iat, rng);
    if (t >= epoch_length) break;
    const double size = std::round(sample(s_pl, rng));
    const std::uint64_t bytes = size < 1.0 ? 1 : static_cast<std::uint64_t>(size);
    r.flows.push_back({t, bytes});
    r.s_f += bytes;
  }
  return r;
}

}  // namespace

FlowsetResult create_flowset(const TrafficMatrix& tm,
                             const StepDistribution& s_pl,
                             const StepDistribution& iat, Rng& rng,
                             const FlowsetOptions& options) {
  const std::uint64_t s_m = tm.total_bytes();
  if (s_m == 0) throw Error("flowset", "traffic matrix has no bytes");
  if (!(iat.mean() > 0.0)) {
    throw Error("flowset", "inter-arrival distribution has zero mean");
  }
  if (options.max_attempts == 0 || !(options.initial_iat_scale > 0.0)) {
    throw Error("flowset", "invalid options");
  }

  double scale = options.initial_iat_scale;
  FlowsetResult best;
  double best_gap = INFINITY;
  for (std::size_t attempt = 1; attempt <= options.max_attempts; ++attempt) {
    FlowsetResult r = draw_once(tm.epoch_length(), s_pl, iat, scale, rng);
    r.s_m = s_m;
    r.attempts = attempt;
    r.epsilon = r.s_f > 0 ? static_cast<double>(s_m) /
                                static_cast<double>(r.s_f)
                          : INFINITY;
    const double gap = std::abs(r.epsilon - 1.0);
    if (gap <= options.tolerance) return r;
    // No arrival at all: shrink the gaps until some land in the epoch.
    const double factor = r.s_f > 0 ? 1.0 / r.epsilon : 0.5;
    if (gap < best_gap) {
      best_gap = gap;
      best = std::move(r);
    }
    scale *= factor;
  }
  throw FlowsetError("no flow set within " +
                         std::to_string(options.tolerance * 100.0) +
                         "% of the traffic matrix after " +
                         std::to_string(options.max_attempts) + " attempts",
                     std::move(best));
}

}  // namespace dcflowgen
