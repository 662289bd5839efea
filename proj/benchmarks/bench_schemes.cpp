#include <benchmark/benchmark.h>

#include "ucplan/harness.hpp"

namespace {

using ucplan::BackendKind;
using ucplan::ExperimentConfig;
using ucplan::SchemeId;
using ucplan::Vector;

ExperimentConfig bench_config(bool seven_dof, SchemeId scheme, BackendKind backend) {
  ExperimentConfig cfg;
  cfg.label = "bench";
  cfg.robot = seven_dof ? ucplan::presets::seven_dof_2rp4r()
                        : ucplan::presets::three_dof_2rp();
  cfg.path.kind = seven_dof ? ucplan::PathKind::InterlacedCircle
                            : ucplan::PathKind::Circle;
  cfg.path.scale = seven_dof ? 0.05 : 0.6;
  cfg.path.z_amplitude = seven_dof ? 0.01 : 0.0;
  cfg.path.total_time = 10.0;
  cfg.path.period = 10.0;
  cfg.path.waypoints = 700;
  cfg.scheme = scheme;
  cfg.backend = backend;
  cfg.unit_factors = {1.0};
  cfg.gains = ucplan::GainSet{100.0, 100.0, 100.0, 100.0, 0.5, Vector()};
  if (seven_dof) {
    cfg.initial_q = Vector(7);
    cfg.initial_q << 0.2, 0.3, -0.35, 1.0, 0.8, 0.5, 0.3;
  } else {
    cfg.initial_q = Vector(3);
    cfg.initial_q << 0.5235987755982988, 0.5235987755982988, -0.7;
  }
  return cfg;
}

void run_scheme(benchmark::State& state, bool seven_dof, SchemeId scheme,
                BackendKind backend) {
  const ExperimentConfig cfg = bench_config(seven_dof, scheme, backend);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ucplan::run_single(cfg, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * cfg.path.waypoints);
}

void BM_ThreeDofWmvnMp(benchmark::State& s) {
  run_scheme(s, false, SchemeId::Wmvn, BackendKind::MP);
}
void BM_ThreeDofWmvnMx(benchmark::State& s) {
  run_scheme(s, false, SchemeId::Wmvn, BackendKind::MX);
}
void BM_ThreeDofFpbmMx(benchmark::State& s) {
  run_scheme(s, false, SchemeId::Fpbm, BackendKind::MX);
}
void BM_SevenDofWmvnMp(benchmark::State& s) {
  run_scheme(s, true, SchemeId::Wmvn, BackendKind::MP);
}
void BM_SevenDofWmvnMx(benchmark::State& s) {
  run_scheme(s, true, SchemeId::Wmvn, BackendKind::MX);
}
void BM_SevenDofFpbmMx(benchmark::State& s) {
  run_scheme(s, true, SchemeId::Fpbm, BackendKind::MX);
}

BENCHMARK(BM_ThreeDofWmvnMp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThreeDofWmvnMx)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThreeDofFpbmMx)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SevenDofWmvnMp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SevenDofWmvnMx)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SevenDofFpbmMx)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
