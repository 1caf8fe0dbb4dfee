#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dcflowgen/deconvolver.hpp"
#include "dcflowgen/flowset.hpp"
#include "dcflowgen/mapper.hpp"
#include "dcflowgen/schedule.hpp"
#include "dcflowgen/tm_generator.hpp"
#include "dcflowgen/validator.hpp"

namespace dcflowgen {

// One file per observed distribution (format: see distribution.hpp).
struct ProfilePaths {
  std::filesystem::path partners_intra;
  std::filesystem::path partners_inter;
  std::filesystem::path bytes_intra;
  std::filesystem::path bytes_inter;
  std::filesystem::path flow_sizes;
  std::filesystem::path inter_arrival;

  // partners_intra_obs.csv, partners_inter_obs.csv, tm_bytes_intra_obs.csv,
  // tm_bytes_inter_obs.csv, flow_size_obs.csv, iat_obs.csv inside dir.
  static ProfilePaths in_directory(const std::filesystem::path& dir);
};

struct RunConfig {
  std::uint32_t racks = 72;
  std::uint32_t hosts_per_rack = 20;
  double duration = 60.0;
  double epoch_length = 10.0;
  std::uint64_t seed = 1;
  AckModel model;
  ProfilePaths inputs;
  MapperStrategy mapper = MapperStrategy::kDrr;
  DrrParams drr;
  DirectionRule direction = DirectionRule::kBothDirections;
  // Add 219 bytes to every observed flow size and 1000 bytes to every
  // observed TM entry before use.
  bool observed_shifts = true;
  double flow_size_shift = 219.0;
  double tm_entry_shift = 1000.0;
  L2Model l2;  // l2.ack is overwritten with model
  // Pilot epochs used to learn how many Layer-2 bytes a TM entry of a given
  // payload turns into once it is split into flows. 0 keeps the plain
  // per-packet scaling.
  std::size_t volume_calibration_rounds = 2;
  DeconvolutionConfig deconvolution;
  FlowsetOptions flowset;
  std::filesystem::path output_dir;

  // Throws dcflowgen::Error("config", ...) on invalid values or missing
  // input files.
  void validate() const;
  std::size_t epoch_count() const;
  RackLayout layout() const;
};

// Observed distributions (after the optional shifts) and the payload
// profile derived from them.
struct PreparedInputs {
  ObservedProfile observed;
  TrafficProfile payload;
};

// Mean payload-direction Layer-2 bytes of a TM entry against its payload
// bytes. Both vectors strictly increase.
struct VolumeCurve {
  std::vector<double> payload;
  std::vector<double> l2;

  bool empty() const { return payload.size() < 2; }
  // Payload whose curve value is x; log-log interpolation inside, constant
  // ratio outside.
  double invert(double x) const;
};

// Runs one pilot epoch with streams (seed, calibration, 3 * round + k) and
// bins every entry's realized Layer-2 bytes by its payload (0.1 decades).
VolumeCurve measure_volume_curve(const TrafficProfile& payload,
                                 const RunConfig& cfg, std::size_t round);

// Reads the six files, applies the shifts, deconvolves both TM-entry
// distributions and extracts payload flow sizes. Layer-2 quantities are
// turned into payload bytes with the L2 model: flow sizes are mapped
// through L2Model::payload_for_l2; volumes start as the deconvolved
// distributions scaled by mss / (mss + per_packet_header) and are then
// refined volume_calibration_rounds times by mapping the deconvolved
// values through the inverse of a pilot-measured VolumeCurve, which adds
// the per-flow handshake and packet rounding that plain scaling misses.
PreparedInputs prepare_inputs(const RunConfig& cfg);

struct EpochResult {
  TrafficMatrix tm;
  FlowsetResult flowset;
  std::vector<MappedFlow> mapped;  // start times relative to the epoch
  double topsoe = 0.0;
};

// Epoch e of a run: TM from stream (seed, traffic matrix, e), flow set from
// (seed, flowset, e), mapping from (seed, mapper, e).
EpochResult generate_epoch(const TrafficProfile& payload,
                           const RunConfig& cfg, std::size_t epoch);

// Hex SHA-256 over the configuration values and the bytes of every input
// file.
std::string config_digest(const RunConfig& cfg);

using EpochCallback =
    std::function<void(std::size_t epoch, const EpochResult& result)>;

// All epochs, concatenated with absolute start times. Writes
// <output_dir>/schedule.csv when output_dir is set. Stage errors are
// rethrown with the epoch index. on_epoch, when given, sees every epoch
// before its flows are merged.
Schedule run_pipeline(const RunConfig& cfg, const EpochCallback& on_epoch = {});

// tm_epoch_<epoch>.csv (src,dst,bytes) and tm_epoch_<epoch>.json (layout,
// seed, epoch index, epoch length) in dir.
void export_tm(const std::filesystem::path& dir, const TrafficMatrix& tm,
               std::uint64_t seed, std::size_t epoch);

// Reads a schedule produced with cfg (the digests must agree), validates it
// against the observed distributions and writes report.json and QQ/PP CSVs
// to <output_dir>/report when output_dir is set.
ValidationReport run_validation(const RunConfig& cfg,
                                const std::filesystem::path& schedule_path);

// Splits an absolute-time schedule into per-epoch flow lists with start
// times relative to their epoch.
std::vector<std::vector<MappedFlow>> split_epochs(const Schedule& schedule,
                                                  double epoch_length,
                                                  std::size_t epochs);

}  // namespace dcflowgen
