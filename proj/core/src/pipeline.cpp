#include "dcflowgen/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dcflowgen/error.hpp"
#include "dcflowgen/payload_extractor.hpp"

namespace dcflowgen {
namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("config", "cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) !=
      1) {
    throw Error("config", "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

std::vector<std::pair<std::string, const std::filesystem::path*>> named_inputs(
    const ProfilePaths& p) {
  return {{"partners_intra", &p.partners_intra},
          {"partners_inter", &p.partners_inter},
          {"bytes_intra", &p.bytes_intra},
          {"bytes_inter", &p.bytes_inter},
          {"flow_sizes", &p.flow_sizes},
          {"inter_arrival", &p.inter_arrival}};
}

ObservedProfile load_observed(const RunConfig& cfg) {
  const auto& in = cfg.inputs;
  const double size_shift = cfg.observed_shifts ? cfg.flow_size_shift : 0.0;
  const double tm_shift = cfg.observed_shifts ? cfg.tm_entry_shift : 0.0;
  return ObservedProfile{
      read_distribution_csv(in.partners_intra, SupportKind::kCount),
      read_distribution_csv(in.partners_inter, SupportKind::kCount),
      read_distribution_csv(in.bytes_intra, SupportKind::kBytes)
          .shifted(tm_shift),
      read_distribution_csv(in.bytes_inter, SupportKind::kBytes)
          .shifted(tm_shift),
      read_distribution_csv(in.flow_sizes, SupportKind::kBytes)
          .shifted(size_shift),
      read_distribution_csv(in.inter_arrival, SupportKind::kSeconds)};
}

L2Model l2_model(const RunConfig& cfg) {
  L2Model m = cfg.l2;
  m.ack = cfg.model;
  return m;
}

StepDistribution payload_sizes(const StepDistribution& l2_sizes,
                               const L2Model& l2) {
  std::map<std::uint64_t, double> mass;
  double prev = 0.0;
  for (const auto& pt : l2_sizes.points()) {
    const double p = pt.cum_prob - prev;
    prev = pt.cum_prob;
    if (p > 0.0) mass[l2.payload_for_l2(pt.value)] += p;
  }
  std::vector<CdfPoint> pts;
  double cum = 0.0;
  for (const auto& [size, p] : mass) {
    cum += p;
    pts.push_back({static_cast<double>(size), std::min(cum, 1.0)});
  }
  pts.back().cum_prob = 1.0;
  return StepDistribution(std::move(pts), SupportKind::kBytes,
                          Interpolation::kStep);
}

StepDistribution through_inverse(const StepDistribution& l2_volumes,
                                 const VolumeCurve& curve) {
  std::vector<CdfPoint> pts;
  for (const auto& pt : l2_volumes.points()) {
    const double v = curve.invert(pt.value);
    if (!pts.empty() && !(v > pts.back().value)) {
      pts.back().cum_prob = pt.cum_prob;
      continue;
    }
    pts.push_back({v, pt.cum_prob});
  }
  return StepDistribution(std::move(pts), l2_volumes.kind(),
                          l2_volumes.interpolation());
}

EpochResult generate_with(const TrafficProfile& payload, const RunConfig& cfg,
                          Rng tm_rng, Rng fs_rng, Rng map_rng) {
  TmGeneratorOptions opts;
  opts.direction = cfg.direction;
  auto tm = build_tm(payload, cfg.layout(), tm_rng, opts, cfg.epoch_length);
  if (tm.empty()) {
    FlowsetResult none;
    none.epsilon = 1.0;
    return EpochResult{std::move(tm), std::move(none), {}, 0.0};
  }
  auto fs = create_flowset(tm, payload.flow_sizes, payload.inter_arrival,
                           fs_rng, cfg.flowset);
  auto mapped = map_flows(fs.flows, tm, map_rng, cfg.mapper, cfg.drr);
  const double q = mapping_quality(tm, mapped);
  return EpochResult{std::move(tm), std::move(fs), std::move(mapped), q};
}

std::string_view mapper_name(MapperStrategy s) {
  return s == MapperStrategy::kDrr ? "drr" : "random";
}

}  // namespace

ProfilePaths ProfilePaths::in_directory(const std::filesystem::path& dir) {
  return ProfilePaths{dir / "partners_intra_obs.csv",
                      dir / "partners_inter_obs.csv",
                      dir / "tm_bytes_intra_obs.csv",
                      dir / "tm_bytes_inter_obs.csv",
                      dir / "flow_size_obs.csv",
                      dir / "iat_obs.csv"};
}

void RunConfig::validate() const {
  if (racks == 0 || hosts_per_rack == 0) {
    throw Error("config", "racks and hosts_per_rack must be positive");
  }
  if (racks * hosts_per_rack < 2) {
    throw Error("config", "need at least two hosts");
  }
  if (!(epoch_length > 0.0) || !(duration > 0.0)) {
    throw Error("config", "duration and epoch_length must be positive");
  }
  const double k = duration / epoch_length;
  if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k) ||
      std::round(k) < 1.0) {
    throw Error("config", "duration must be a positive multiple of "
                          "epoch_length");
  }
  model.validate();
  if (!(drr.alpha > 0.0) || !(drr.omega > 0.0)) {
    throw Error("config", "alpha and omega must be positive");
  }
  for (const auto& [name, path] : named_inputs(inputs)) {
    if (path->empty() || !std::filesystem::is_regular_file(*path)) {
      throw Error("config", "input '" + name + "' not found: " +
                                path->string());
    }
  }
}

std::size_t RunConfig::epoch_count() const {
  return static_cast<std::size_t>(std::llround(duration / epoch_length));
}

RackLayout RunConfig::layout() const {
  return RackLayout(racks * hosts_per_rack, hosts_per_rack);
}

PreparedInputs prepare_inputs(const RunConfig& cfg) {
  cfg.validate();
  auto observed = load_observed(cfg);
  const L2Model l2 = l2_model(cfg);
  const double to_payload = cfg.model.mss / (cfg.model.mss + l2.per_packet_header);

  const auto l2_intra = deconvolve(observed.bytes_intra, cfg.model,
                                   cfg.deconvolution);
  const auto l2_inter = deconvolve(observed.bytes_inter, cfg.model,
                                   cfg.deconvolution);

  const auto pmf = discretize_flow_sizes(observed.flow_sizes, cfg.model);
  const auto pl = infer_payload_sizes(pmf);
  auto sizes = payload_sizes(pl.to_distribution(), l2);

  TrafficProfile payload{observed.partners_intra,
                         observed.partners_inter,
                         l2_intra.scaled(to_payload),
                         l2_inter.scaled(to_payload),
                         std::move(sizes),
                         observed.inter_arrival,
                         cfg.model};
  for (std::size_t round = 0; round < cfg.volume_calibration_rounds;
       ++round) {
    const auto curve = measure_volume_curve(payload, cfg, round);
    if (curve.empty()) break;
    payload.bytes_intra = through_inverse(l2_intra, curve);
    payload.bytes_inter = through_inverse(l2_inter, curve);
  }
  return PreparedInputs{std::move(observed), std::move(payload)};
}

double VolumeCurve::invert(double x) const {
  if (empty()) throw Error("calibration", "volume curve needs two points");
  if (x <= l2.front()) return x * payload.front() / l2.front();
  if (x >= l2.back()) return x * payload.back() / l2.back();
  const auto it = std::upper_bound(l2.begin(), l2.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - l2.begin());
  const double t = (std::log(x) - std::log(l2[i - 1])) /
                   (std::log(l2[i]) - std::log(l2[i - 1]));
  return std::exp(std::log(payload[i - 1]) +
                  t * (std::log(payload[i]) - std::log(payload[i - 1])));
}

VolumeCurve measure_volume_curve(const TrafficProfile& payload,
                                 const RunConfig& cfg, std::size_t round) {
  const std::uint64_t base = 3 * static_cast<std::uint64_t>(round);
  const auto pilot = generate_with(
      payload, cfg, derive_stream(cfg.seed, Stream::kCalibration, base),
      derive_stream(cfg.seed, Stream::kCalibration, base + 1),
      derive_stream(cfg.seed, Stream::kCalibration, base + 2));
  const L2Model l2 = l2_model(cfg);

  std::map<std::pair<NodeId, NodeId>, double> realized;
  for (const auto& f : pilot.mapped) {
    realized[{f.src, f.dst}] += static_cast<double>(l2.payload_l2(f.size));
  }
  // bin -> (sum payload, sum l2, count)
  std::map<long, std::array<double, 3>> bins;
  for (const auto& e : pilot.tm.entries()) {
    const auto it = realized.find({e.src, e.dst});
    if (it == realized.end()) continue;
    const double v = static_cast<double>(e.bytes);
    auto& b = bins[std::lround(std::floor(10.0 * std::log10(v)))];
    b[0] += v;
    b[1] += it->second;
    b[2] += 1.0;
  }
  VolumeCurve curve;
  for (const auto& [key, b] : bins) {
    const double v = b[0] / b[2];
    const double x = b[1] / b[2];
    // Keep the curve strictly increasing; bins that would bend it back are
    // noise from a handful of entries.
    if (!curve.payload.empty() &&
        (!(v > curve.payload.back()) || !(x > curve.l2.back()))) {
      continue;
    }
    curve.payload.push_back(v);
    curve.l2.push_back(x);
  }
  return curve;
}

EpochResult generate_epoch(const TrafficProfile& payload,
                           const RunConfig& cfg, std::size_t epoch) {
  return generate_with(payload, cfg,
                       derive_stream(cfg.seed, Stream::kTrafficMatrix, epoch),
                       derive_stream(cfg.seed, Stream::kFlowset, epoch),
                       derive_stream(cfg.seed, Stream::kMapper, epoch));
}

std::string config_digest(const RunConfig& cfg) {
  nlohmann::json j;
  j["racks"] = cfg.racks;
  j["hosts_per_rack"] = cfg.hosts_per_rack;
  j["duration"] = cfg.duration;
  j["epoch_length"] = cfg.epoch_length;
  j["seed"] = cfg.seed;
  j["r"] = cfg.model.r;
  j["mss"] = cfg.model.mss;
  j["ack_packet_size"] = cfg.model.ack_packet_size;
  j["mapper"] = mapper_name(cfg.mapper);
  j["alpha"] = cfg.drr.alpha;
  j["omega"] = cfg.drr.omega;
  j["direction"] = cfg.direction == DirectionRule::kBothDirections ? "both"
                                                                   : "one";
  j["observed_shifts"] = cfg.observed_shifts;
  j["flow_size_shift"] = cfg.flow_size_shift;
  j["tm_entry_shift"] = cfg.tm_entry_shift;
  j["volume_calibration_rounds"] = cfg.volume_calibration_rounds;
  j["handshake_overhead"] = cfg.l2.handshake_overhead;
  j["per_packet_header"] = cfg.l2.per_packet_header;
  j["ack_handshake_overhead"] = cfg.l2.ack_handshake_overhead;
  j["grid_size"] = cfg.deconvolution.grid_size;
  j["product_terms"] = cfg.deconvolution.product_terms;
  j["smoothing_window"] = cfg.deconvolution.smoothing_window;
  j["negativity_clip"] = cfg.deconvolution.negativity_clip;
  j["tolerance"] = cfg.flowset.tolerance;
  j["max_attempts"] = cfg.flowset.max_attempts;
  std::string data = j.dump();
  for (const auto& [name, path] : named_inputs(cfg.inputs)) {
    const auto content = read_file(*path);
    data += '\n' + name + ' ' + std::to_string(content.size()) + '\n';
    data += content;
  }
  return sha256_hex(data);
}

Schedule run_pipeline(const RunConfig& cfg, const EpochCallback& on_epoch) {
  const auto inputs = prepare_inputs(cfg);
  Schedule s;
  s.meta.seed = cfg.seed;
  s.meta.config_digest = config_digest(cfg);
  s.meta.tool_version = std::string(tool_version());
  s.meta.racks = cfg.racks;
  s.meta.hosts_per_rack = cfg.hosts_per_rack;
  s.meta.epoch_length = cfg.epoch_length;
  s.meta.mapper = std::string(mapper_name(cfg.mapper));

  for (std::size_t e = 0; e < cfg.epoch_count(); ++e) {
    EpochResult r = [&] {
      try {
        return generate_epoch(inputs.payload, cfg, e);
      } catch (const Error& err) {
        throw Error(err.stage(),
                    "epoch " + std::to_string(e) + ": " + err.detail());
      }
    }();
    if (on_epoch) on_epoch(e, r);
    const double base = static_cast<double>(e) * cfg.epoch_length;
    const double end = static_cast<double>(e + 1) * cfg.epoch_length;
    for (auto f : r.mapped) {
      f.start_time = base + f.start_time;
      // Keep the flow inside its epoch after rounding.
      if (f.start_time >= end) f.start_time = std::nextafter(end, 0.0);
      s.flows.push_back(f);
    }
    s.meta.epochs.push_back(EpochMeta{e, r.mapped.size(), r.tm.total_bytes(),
                                      r.flowset.epsilon, r.flowset.iat_scale,
                                      r.flowset.attempts, r.topsoe});
  }
  std::sort(s.flows.begin(), s.flows.end(),
            [](const MappedFlow& a, const MappedFlow& b) {
              if (a.start_time != b.start_time) {
                return a.start_time < b.start_time;
              }
              if (a.src != b.src) return a.src < b.src;
              if (a.dst != b.dst) return a.dst < b.dst;
              return a.size < b.size;
            });

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    write_schedule(cfg.output_dir / "schedule.csv", s);
  }
  return s;
}

void export_tm(const std::filesystem::path& dir, const TrafficMatrix& tm,
               std::uint64_t seed, std::size_t epoch) {
  std::filesystem::create_directories(dir);
  const std::string stem = "tm_epoch_" + std::to_string(epoch);
  {
    std::ofstream out(dir / (stem + ".csv"), std::ios::binary);
    if (!out) throw Error("export", "cannot write " + stem + ".csv");
    out << "src,dst,bytes\n";
    for (const auto& e : tm.entries()) {
      out << e.src << ',' << e.dst << ',' << e.bytes << '\n';
    }
  }
  const auto& layout = tm.layout();
  nlohmann::json j;
  j["layout"] = {{"n", layout.node_count()},
                 {"m", layout.rack_size()},
                 {"k", layout.rack_count()}};
  j["seed"] = seed;
  j["epoch"] = epoch;
  j["epoch_length"] = tm.epoch_length();
  j["entries"] = tm.nonzero_count();
  j["total_bytes"] = tm.total_bytes();
  std::ofstream side(dir / (stem + ".json"), std::ios::binary);
  if (!side) throw Error("export", "cannot write " + stem + ".json");
  side << j.dump(2) << '\n';
}

std::vector<std::vector<MappedFlow>> split_epochs(const Schedule& schedule,
                                                  double epoch_length,
                                                  std::size_t epochs) {
  std::vector<std::vector<MappedFlow>> out(epochs);
  for (auto f : schedule.flows) {
    auto e = static_cast<std::size_t>(std::floor(f.start_time / epoch_length));
    if (f.start_time < 0.0 || e >= epochs) {
      throw Error("validate", "flow outside the configured duration");
    }
    f.start_time -= static_cast<double>(e) * epoch_length;
    out[e].push_back(f);
  }
  return out;
}

ValidationReport run_validation(const RunConfig& cfg,
                                const std::filesystem::path& schedule_path) {
  cfg.validate();
  const Schedule s = read_schedule(schedule_path);
  const auto digest = config_digest(cfg);
  if (s.meta.config_digest != digest) {
    throw Error("validate", "schedule was generated from a different "
                            "configuration or input files (digest " +
                                s.meta.config_digest + ", expected " +
                                digest + ")");
  }
  const auto observed = load_observed(cfg);
  const auto epochs = split_epochs(s, cfg.epoch_length, cfg.epoch_count());
  auto report = validate(epochs, observed, l2_model(cfg), cfg.layout(),
                         cfg.epoch_length);
  if (!cfg.output_dir.empty()) write_report(cfg.output_dir / "report", report);
  return report;
}

}  // namespace dcflowgen
