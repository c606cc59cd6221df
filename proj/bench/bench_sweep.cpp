// Serial reference sweep against the OpenMP sweep on the same grids, plus the
// single-point kernels they are built from.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "harvest/harvesting.hpp"
#include "harvest/sweep.hpp"

using namespace harvest;

namespace {

sweep::SweepRequest grid(DispersionKind kind, int n) {
  sweep::SweepRequest req;
  req.R = kind == DispersionKind::DipolarBogoliubov ? kMaxR : 0.0;
  req.A = 3.4;
  req.kind = kind;
  req.base = {0.0, 5.0, 0.0};
  req.axes = {sweep::SweepAxis::range(sweep::AxisName::OmegaGap, 0.01, 2.0, n),
              sweep::SweepAxis::range(sweep::AxisName::Separation, 0.1, 10.0, n)};
  return req;
}

void BM_SweepSerial(benchmark::State& state, DispersionKind kind) {
  const auto req = grid(kind, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sweep::run_sweep_serial(req));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(req.point_count()));
}

void BM_SweepOpenMP(benchmark::State& state, DispersionKind kind) {
  const auto req = grid(kind, static_cast<int>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sweep::run_sweep(req, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(req.point_count()));
  state.counters["workers"] = workers;
}

void BM_Point(benchmark::State& state, DispersionKind kind) {
  const auto model = DimensionlessModel::create(kind == DispersionKind::DipolarBogoliubov ? kMaxR : 0.0, 3.4);
  const DetectorPair pair{0.1, 5.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(compute_observables(model, kind, pair));
}

void worker_args(benchmark::internal::Benchmark* b) {
  const int max = omp_get_num_procs();
  for (int n : {10, 30})
    for (int w = 1; w <= std::max(8, max); w *= 2) b->Args({n, w});
}

}  // namespace

BENCHMARK_CAPTURE(BM_Point, li, DispersionKind::LorentzInvariantIdeal);
BENCHMARK_CAPTURE(BM_Point, dipolar, DispersionKind::DipolarBogoliubov);
BENCHMARK_CAPTURE(BM_SweepSerial, li, DispersionKind::LorentzInvariantIdeal)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SweepSerial, dipolar, DispersionKind::DipolarBogoliubov)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SweepOpenMP, li, DispersionKind::LorentzInvariantIdeal)->Apply(worker_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_SweepOpenMP, dipolar, DispersionKind::DipolarBogoliubov)->Apply(worker_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
