// dcflowgen command line: generate, validate, deconvolve, degcheck.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcflowgen/compare.hpp"
#include "dcflowgen/deconvolver.hpp"
#include "dcflowgen/degseq.hpp"
#include "dcflowgen/error.hpp"
#include "dcflowgen/pipeline.hpp"

namespace fs = std::filesystem;
using namespace dcflowgen;

namespace {

struct RunFlags {
  RunConfig cfg;
  std::string profile_dir = DCFLOWGEN_DEFAULT_PROFILE;
  ProfilePaths overrides;
  std::string mapper = "drr";
  std::string direction = "both";
  bool no_shifts = false;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  auto& c = f.cfg;
  app->add_option("--racks", c.racks, "Number of racks")->capture_default_str();
  app->add_option("--hosts-per-rack", c.hosts_per_rack, "Servers per rack")
      ->capture_default_str();
  app->add_option("--duration", c.duration, "Seconds of traffic")
      ->capture_default_str();
  app->add_option("--epoch-length", c.epoch_length, "Seconds per traffic matrix")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--r", c.model.r, "Payload packets per ACK packet")
      ->capture_default_str();
  app->add_option("--mss", c.model.mss, "Maximum segment size (bytes)")
      ->capture_default_str();
  app->add_option("--profile", f.profile_dir,
                  "Directory with the six *_obs.csv distribution files")
      ->capture_default_str();
  app->add_option("--partners-intra", f.overrides.partners_intra,
                  "Override: intra-rack partner count CDF");
  app->add_option("--partners-inter", f.overrides.partners_inter,
                  "Override: inter-rack partner count CDF");
  app->add_option("--bytes-intra", f.overrides.bytes_intra,
                  "Override: intra-rack TM entry CDF (bytes)");
  app->add_option("--bytes-inter", f.overrides.bytes_inter,
                  "Override: inter-rack TM entry CDF (bytes)");
  app->add_option("--flow-sizes", f.overrides.flow_sizes,
                  "Override: Layer-2 flow size CDF (bytes)");
  app->add_option("--iat", f.overrides.inter_arrival,
                  "Override: flow inter-arrival CDF (seconds)");
  app->add_option("--mapper", f.mapper, "Flow-to-pair mapper")
      ->check(CLI::IsMember({"drr", "random"}))
      ->capture_default_str();
  app->add_option("--alpha", c.drr.alpha, "DRR credit share of the residual")
      ->capture_default_str();
  app->add_option("--omega", c.drr.omega, "DRR minimum credit (bytes)")
      ->capture_default_str();
  app->add_option("--direction", f.direction,
                  "Directed entries per communication edge")
      ->check(CLI::IsMember({"both", "one"}))
      ->capture_default_str();
  app->add_flag("--no-shifts", f.no_shifts,
                "Use observed flow sizes and TM entries without the +219 / "
                "+1000 byte shifts");
  app->add_option("--out", c.output_dir, "Output directory")->required();
}

RunConfig finish(const RunFlags& f) {
  RunConfig c = f.cfg;
  c.inputs = ProfilePaths::in_directory(f.profile_dir);
  auto pick = [](fs::path& dst, const fs::path& o) {
    if (!o.empty()) dst = o;
  };
  pick(c.inputs.partners_intra, f.overrides.partners_intra);
  pick(c.inputs.partners_inter, f.overrides.partners_inter);
  pick(c.inputs.bytes_intra, f.overrides.bytes_intra);
  pick(c.inputs.bytes_inter, f.overrides.bytes_inter);
  pick(c.inputs.flow_sizes, f.overrides.flow_sizes);
  pick(c.inputs.inter_arrival, f.overrides.inter_arrival);
  c.mapper = f.mapper == "drr" ? MapperStrategy::kDrr : MapperStrategy::kRandom;
  c.direction = f.direction == "both" ? DirectionRule::kBothDirections
                                      : DirectionRule::kOneDirection;
  c.observed_shifts = !f.no_shifts;
  return c;
}

int cmd_generate(const RunFlags& f, bool export_tms) {
  const RunConfig cfg = finish(f);
  const auto t0 = std::chrono::steady_clock::now();
  EpochCallback on_epoch = [&](std::size_t e, const EpochResult& r) {
    std::fprintf(stderr,
                 "epoch %zu: %zu entries, %zu flows, eps %.4f, "
                 "attempts %zu, topsoe %.4f\n",
                 e, r.tm.nonzero_count(), r.mapped.size(), r.flowset.epsilon,
                 r.flowset.attempts, r.topsoe);
    if (export_tms) export_tm(cfg.output_dir / "tms", r.tm, cfg.seed, e);
  };
  const Schedule s = run_pipeline(cfg, on_epoch);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  std::printf("wrote %s (%zu flows, %zu epochs) in %.1f s\n",
              (cfg.output_dir / "schedule.csv").string().c_str(),
              s.flows.size(), s.meta.epochs.size(), secs);
  return 0;
}

int cmd_validate(const RunFlags& f, const std::string& schedule) {
  const RunConfig cfg = finish(f);
  const fs::path path =
      schedule.empty() ? cfg.output_dir / "schedule.csv" : fs::path(schedule);
  const auto rep = run_validation(cfg, path);
  std::printf("%-16s %10s %10s  %s\n", "distribution", "ks", "topsoe", "");
  for (const auto& c : rep.checks) {
    const char* note = c.expected_mismatch ? "(mismatch expected)" : "";
    std::printf("%-16s %10.4f %10.4f  %s\n", c.name.c_str(),
                c.report.ks_sup_distance, c.report.topsoe, note);
  }
  std::printf("report: %s\n", (cfg.output_dir / "report").string().c_str());
  return 0;
}

int cmd_deconvolve(const fs::path& input, const fs::path& output, double shift,
                   const AckModel& model, const DeconvolutionConfig& dc) {
  auto z = read_distribution_csv(input, SupportKind::kBytes);
  if (shift != 0.0) z = z.shifted(shift);
  const auto t0 = std::chrono::steady_clock::now();
  const auto x = deconvolve(z, model, dc);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  const auto back = reconvolve_check(x, model, dc.grid_size);
  write_distribution_csv(output, x);
  std::printf("beta %.6f, %zu output points, %.2f s\n", model.beta(), x.size(),
              secs);
  std::printf("KS(reconvolved, input) = %.4f; mean(x)(1+beta)/mean(z) = %.4f\n",
              ks_distance(back, z), x.mean() * (1.0 + model.beta()) / z.mean());
  return 0;
}

int cmd_degcheck(const std::vector<std::uint32_t>& degrees,
                 std::uint32_t rack_size) {
  DegreeSequence d{degrees, DegreeKind::kIntra};
  const bool ok = erdos_gallai_check(d);
  std::printf("sum %llu, Erdos-Gallai: %s\n",
              static_cast<unsigned long long>(d.sum()),
              ok ? "graphical" : "not graphical");
  if (ok) {
    const auto g = havel_hakimi(d);
    std::printf("Havel-Hakimi edges (%zu):", g->edge_count());
    for (const auto& [a, b] : g->edges()) std::printf(" %u-%u", a, b);
    std::printf("\n");
  }
  if (rack_size > 0) {
    const RackLayout layout(static_cast<std::uint32_t>(degrees.size()),
                            rack_size);
    d.kind = DegreeKind::kInter;
    const auto g = solve_inter_rack(d, layout);
    std::printf("cross-rack graph with racks of %u: %zu edges, shortfall %llu\n",
                rack_size, g.edge_count(),
                static_cast<unsigned long long>(degree_shortfall(d, g)));
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow-level data center traffic schedule generator"};
  app.require_subcommand(1);

  RunFlags gen_flags;
  bool export_tms = false;
  auto* gen = app.add_subcommand("generate", "Generate a payload schedule");
  add_run_flags(gen, gen_flags);
  gen->add_flag("--export-tms", export_tms,
                "Also write every epoch's payload traffic matrix");

  RunFlags val_flags;
  std::string schedule;
  auto* val = app.add_subcommand(
      "validate", "Compare a schedule's Layer-2 statistics with the inputs");
  add_run_flags(val, val_flags);
  val->add_option("--schedule", schedule,
                  "Schedule file (default: <out>/schedule.csv)");

  fs::path dc_in;
  fs::path dc_out;
  double dc_shift = 0.0;
  AckModel dc_model;
  DeconvolutionConfig dc_cfg;
  auto* dec = app.add_subcommand(
      "deconvolve", "Recover payload TM-entry volumes from observed ones");
  dec->add_option("--input", dc_in, "Observed TM-entry CDF")->required();
  dec->add_option("--output", dc_out, "Where to write the payload CDF")
      ->required();
  dec->add_option("--shift", dc_shift, "Bytes added to the input first")
      ->capture_default_str();
  dec->add_option("--r", dc_model.r)->capture_default_str();
  dec->add_option("--mss", dc_model.mss)->capture_default_str();
  dec->add_option("--grid-size", dc_cfg.grid_size)->capture_default_str();
  dec->add_option("--terms", dc_cfg.product_terms)->capture_default_str();
  dec->add_option("--window", dc_cfg.smoothing_window)->capture_default_str();

  std::vector<std::uint32_t> degrees;
  std::uint32_t rack_size = 0;
  auto* deg = app.add_subcommand(
      "degcheck", "Test a degree sequence and realize it if possible");
  deg->add_option("degrees", degrees, "Node degrees")->required();
  deg->add_option("--rack-size", rack_size,
                  "Also solve the cross-rack variant with racks of this size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(gen_flags, export_tms);
    if (*val) return cmd_validate(val_flags, schedule);
    if (*dec) return cmd_deconvolve(dc_in, dc_out, dc_shift, dc_model, dc_cfg);
    if (*deg) return cmd_degcheck(degrees, rack_size);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.stage().c_str(),
                 e.detail().c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
