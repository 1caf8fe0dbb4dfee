#include "dcflowgen/validator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "dcflowgen/error.hpp"

namespace dcflowgen {
namespace {

constexpr double kMatchThreshold = 0.05;

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

StepDistribution empirical_or_zero(const std::vector<double>& v,
                                   SupportKind kind) {
  if (v.empty()) return StepDistribution::point_mass(0.0, kind);
  return empirical_cdf(v, kind);
}

void write_pairs(const std::filesystem::path& path, const char* header,
                 const std::vector<std::pair<double, double>>& pts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("validate", "cannot write " + path.string());
  out << header << '\n';
  for (const auto& [a, b] : pts) out << fmt(a) << ',' << fmt(b) << '\n';
}

}  // namespace

std::uint64_t L2Model::payload_l2(std::uint64_t payload) const {
  const auto segments = static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(payload) / ack.mss));
  return static_cast<std::uint64_t>(std::llround(handshake_overhead)) +
         payload +
         segments * static_cast<std::uint64_t>(std::llround(per_packet_header));
}

std::uint64_t L2Model::ack_l2(std::uint64_t payload) const {
  return static_cast<std::uint64_t>(std::llround(ack_handshake_overhead)) +
         ack_flow_size(payload, ack);
}

std::uint64_t L2Model::payload_for_l2(double l2_bytes) const {
  const double y = std::floor(l2_bytes) - std::llround(handshake_overhead);
  if (!(y > 0.0)) return 1;
  const double mss = ack.mss;
  const double hdr = std::llround(per_packet_header);
  // With k segments the payload is at most min(k * mss, y - k * hdr).
  const double k0 = std::floor(y / (mss + hdr));
  double best = 0.0;
  for (double k : {k0, k0 + 1.0}) {
    best = std::max(best, std::min(k * mss, y - k * hdr));
  }
  auto p = static_cast<std::uint64_t>(std::max(best, 1.0));
  while (p > 1 && static_cast<double>(payload_l2(p)) > l2_bytes) --p;
  return p;
}

L2FlowSizes l2_flow_sizes(std::span<const MappedFlow> flows,
                          const L2Model& model) {
  L2FlowSizes out;
  out.payload_l2.reserve(flows.size());
  out.ack_l2.reserve(flows.size());
  for (const auto& f : flows) {
    out.payload_l2.push_back(model.payload_l2(f.size));
    out.ack_l2.push_back(model.ack_l2(f.size));
  }
  return out;
}

TrafficMatrix synthesize_l2_tm(std::span<const MappedFlow> epoch_flows,
                               const L2Model& model, const RackLayout& layout,
                               double epoch_length) {
  std::vector<TmEntry> entries;
  entries.reserve(2 * epoch_flows.size());
  for (const auto& f : epoch_flows) {
    entries.push_back({f.src, f.dst, model.payload_l2(f.size)});
    entries.push_back({f.dst, f.src, model.ack_l2(f.size)});
  }
  return TrafficMatrix::from_entries(layout, std::move(entries), epoch_length);
}

const DistributionCheck& ValidationReport::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("validate", "no check named " + std::string(name));
}

ValidationReport validate(std::span<const std::vector<MappedFlow>> epochs,
                          const ObservedProfile& observed,
                          const L2Model& model, const RackLayout& layout,
                          double epoch_length, std::size_t n_points) {
  if (epochs.empty()) throw Error("validate", "no epochs");
  const std::uint32_t n = layout.node_count();

  std::vector<double> bytes_intra;
  std::vector<double> bytes_inter;
  std::vector<double> partners_intra;
  std::vector<double> partners_inter;
  std::vector<double> sizes;
  std::vector<double> gaps;
  std::size_t flow_count = 0;

  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<double> starts;
  for (const auto& flows : epochs) {
    flow_count += flows.size();
    const auto tm = synthesize_l2_tm(flows, model, layout, epoch_length);

    pairs.clear();
    for (const auto& e : tm.entries()) {
      auto& dst = layout.same_rack(e.src, e.dst) ? bytes_intra : bytes_inter;
      dst.push_back(static_cast<double>(e.bytes));
      pairs.emplace_back(std::min(e.src, e.dst), std::max(e.src, e.dst));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<std::uint32_t> deg_intra(n, 0);
    std::vector<std::uint32_t> deg_inter(n, 0);
    for (const auto& [a, b] : pairs) {
      auto& deg = layout.same_rack(a, b) ? deg_intra : deg_inter;
      ++deg[a];
      ++deg[b];
    }
    for (NodeId i = 0; i < n; ++i) {
      partners_intra.push_back(deg_intra[i]);
      partners_inter.push_back(deg_inter[i]);
    }

    // Every payload flow opens a Layer-2 flow in each direction at the same
    // instant; zero-byte ACK flows do not appear on the wire.
    starts.clear();
    for (const auto& f : flows) {
      sizes.push_back(static_cast<double>(model.payload_l2(f.size)));
      starts.push_back(f.start_time);
      const auto ack = model.ack_l2(f.size);
      if (ack > 0) {
        sizes.push_back(static_cast<double>(ack));
        starts.push_back(f.start_time);
      }
    }
    std::sort(starts.begin(), starts.end());
    for (std::size_t k = 1; k < starts.size(); ++k) {
      gaps.push_back(starts[k] - starts[k - 1]);
    }
  }

  ValidationReport rep;
  rep.epochs = epochs.size();
  rep.flows = flow_count;
  auto add = [&](std::string_view name, StepDistribution gen,
                 const StepDistribution& obs, bool mismatch) {
    auto cmp = compare(gen, obs, n_points);
    rep.checks.push_back(DistributionCheck{std::string(name), std::move(gen),
                                           obs, std::move(cmp), mismatch});
  };
  add(kCheckBytesIntra, empirical_or_zero(bytes_intra, SupportKind::kBytes),
      observed.bytes_intra, false);
  add(kCheckBytesInter, empirical_or_zero(bytes_inter, SupportKind::kBytes),
      observed.bytes_inter, false);
  add(kCheckPartnersIntra,
      empirical_or_zero(partners_intra, SupportKind::kCount),
      observed.partners_intra, false);
  add(kCheckPartnersInter,
      empirical_or_zero(partners_inter, SupportKind::kCount),
      observed.partners_inter, false);
  add(kCheckFlowSizes, empirical_or_zero(sizes, SupportKind::kBytes),
      observed.flow_sizes, false);
  add(kCheckInterArrival, empirical_or_zero(gaps, SupportKind::kSeconds),
      observed.inter_arrival, true);
  return rep;
}

nlohmann::json to_json(const ValidationReport& report) {
  nlohmann::json j;
  j["epochs"] = report.epochs;
  j["flows"] = report.flows;
  auto& arr = j["comparisons"] = nlohmann::json::array();
  for (const auto& c : report.checks) {
    const bool matches = c.report.ks_sup_distance < kMatchThreshold;
    nlohmann::json e;
    e["name"] = c.name;
    e["ks_sup_distance"] = c.report.ks_sup_distance;
    e["topsoe"] = c.report.topsoe;
    e["generated_mean"] = c.generated.mean();
    e["observed_mean"] = c.observed.mean();
    e["matches"] = matches;
    e["expected_mismatch"] = c.expected_mismatch;
    if (c.expected_mismatch) {
      e["note"] = matches ? "unexpected match"
                          : "mismatch expected: arrivals are drawn from the "
                            "observed Layer-2 distribution and ACK flows start "
                            "together with their payload flows";
    }
    arr.push_back(std::move(e));
  }
  return j;
}

void write_report(const std::filesystem::path& dir,
                  const ValidationReport& report) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json", std::ios::binary);
    if (!out) throw Error("validate", "cannot write report.json");
    out << to_json(report).dump(2) << '\n';
  }
  for (const auto& c : report.checks) {
    write_pairs(dir / (c.name + "_qq.csv"), "generated_quantile,observed_quantile",
                c.report.qq_points);
    write_pairs(dir / (c.name + "_pp.csv"), "generated_cum_prob,observed_cum_prob",
                c.report.pp_points);
  }
}

}  // namespace dcflowgen
