#include <benchmark/benchmark.h>

#include <vector>

#include "dcflowgen/deconvolver.hpp"
#include "dcflowgen/degseq.hpp"
#include "dcflowgen/density_grid.hpp"
#include "dcflowgen/flowset.hpp"
#include "dcflowgen/mapper.hpp"
#include "dcflowgen/pipeline.hpp"

namespace {

using namespace dcflowgen;

// Prepared once; calibration runs pilot epochs and would dominate.
const PreparedInputs& inputs() {
  static const PreparedInputs in = [] {
    RunConfig cfg;
    cfg.inputs = ProfilePaths::in_directory(DCFLOWGEN_PROFILE_DIR);
    return prepare_inputs(cfg);
  }();
  return in;
}

const RackLayout kPaperLayout(72 * 20, 20);

void BM_Convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DensityGrid a, b;
  Rng rng(1);
  for (std::size_t i = 0; i < n; ++i) {
    a.masses.push_back(rng.uniform01());
    b.masses.push_back(rng.uniform01());
  }
  for (auto _ : state) benchmark::DoNotOptimize(convolve(a, b));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(16)->Range(1 << 10, 1 << 18)
    ->Unit(benchmark::kMillisecond);

void BM_Deconvolve(benchmark::State& state) {
  const auto z = read_distribution_csv(
                     DCFLOWGEN_PROFILE_DIR "/tm_bytes_inter_obs.csv",
                     SupportKind::kBytes)
                     .shifted(1000.0);
  DeconvolutionConfig cfg;
  cfg.grid_size = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(deconvolve(z, AckModel{}, cfg));
}
BENCHMARK(BM_Deconvolve)->Arg(1 << 18)->Arg(1 << 20)->Arg(1 << 22)
    ->Unit(benchmark::kMillisecond);

void BM_HavelHakimi(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::uint32_t>(state.range(0));
  DegreeSequence d{std::vector<std::uint32_t>(n), DegreeKind::kIntra};
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (rng.below(100) == 0) {
        ++d.degrees[a];
        ++d.degrees[b];
      }
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(havel_hakimi(d));
}
BENCHMARK(BM_HavelHakimi)->Arg(1440)->Unit(benchmark::kMillisecond);

void BM_InterRackGreedy(benchmark::State& state) {
  Rng rng(3);
  const auto [intra, inter] = sample_degrees(inputs().payload, kPaperLayout, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_inter_rack(inter, kPaperLayout));
  }
}
BENCHMARK(BM_InterRackGreedy)->Unit(benchmark::kMillisecond);

void BM_IntraRackLocalSearch(benchmark::State& state) {
  Rng rng(4);
  const auto& prior = inputs().payload.partners_intra;
  DegreeSequence d{std::vector<std::uint32_t>(20), DegreeKind::kIntra};
  for (auto& x : d.degrees) x = static_cast<std::uint32_t>(sample(prior, rng));
  for (auto _ : state) benchmark::DoNotOptimize(solve_intra_rack(d, prior));
}
BENCHMARK(BM_IntraRackLocalSearch)->Unit(benchmark::kMicrosecond);

void BM_BuildTm(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(build_tm(inputs().payload, kPaperLayout, rng));
  }
}
BENCHMARK(BM_BuildTm)->Unit(benchmark::kMillisecond);

void BM_CreateFlowset(benchmark::State& state) {
  Rng tm_rng(5);
  const auto tm = build_tm(inputs().payload, kPaperLayout, tm_rng);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(create_flowset(tm, inputs().payload.flow_sizes,
                                            inputs().payload.inter_arrival,
                                            rng));
  }
}
BENCHMARK(BM_CreateFlowset)->Unit(benchmark::kMillisecond);

void BM_Map(benchmark::State& state) {
  Rng tm_rng(6), fs_rng(7);
  const auto tm = build_tm(inputs().payload, kPaperLayout, tm_rng);
  const auto fs = create_flowset(tm, inputs().payload.flow_sizes,
                                 inputs().payload.inter_arrival, fs_rng);
  const auto strategy = static_cast<MapperStrategy>(state.range(0));
  for (auto _ : state) {
    Rng rng(8);
    benchmark::DoNotOptimize(map_flows(fs.flows, tm, rng, strategy));
  }
  state.counters["flows"] = static_cast<double>(fs.flows.size());
}
BENCHMARK(BM_Map)
    ->Arg(static_cast<int>(MapperStrategy::kDrr))
    ->Arg(static_cast<int>(MapperStrategy::kRandom))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
