#include <benchmark/benchmark.h>

#include <cmath>

#include "abwave/analysis.hpp"
#include "abwave/propagator.hpp"
#include "abwave/specfn.hpp"
#include "abwave/wavefield.hpp"

namespace {

using namespace abwave;

void BM_Dawson(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 0.37;
    if (x > 20.0) x -= 40.0;
    benchmark::DoNotOptimize(specfn::dawson(x));
  }
}
BENCHMARK(BM_Dawson);

void BM_ErfiDamped(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 0.37;
    if (x > 40.0) x -= 80.0;
    benchmark::DoNotOptimize(specfn::erfi_damped(x));
  }
}
BENCHMARK(BM_ErfiDamped);

// 1-D direct path sum, source samples x 1001 targets (the fig2 workload).
void BM_Direct1D(benchmark::State& state) {
  const auto beam = wavefield::BeamParams::from_energy(60000.0, 50e-9);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto src = wavefield::phase_step_state(wavefield::Grid1D::centered(n, 6e-7),
                                               analytic::FluxStrength(0.25), 50e-9);
  const double L = 10.0;
  const double half = 10.0 / beam.paraxial_w() * L;
  const wavefield::Grid1D target(1001, 2.0 * half / 1000.0 * 1001.0, -half);
  const propagator::PropagationGeometry<wavefield::Grid1D> geom{L, target};
  for (auto _ : state) {
    auto r = propagator::propagate_direct(src, geom, beam.lambda_db(), {wavefield::NormConvention::raw, 1});
    benchmark::DoNotOptimize(r.field.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * 1001);
}
BENCHMARK(BM_Direct1D)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

// 2-D Fraunhofer route on the fig5 aperture.
void BM_Fraunhofer2D(benchmark::State& state) {
  const auto beam = wavefield::BeamParams::from_energy(60000.0, 50e-9);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto grid = wavefield::Grid2D::centered(n, n, 20e-6, 20e-6);
  const auto src = wavefield::circular_aperture_state(
      grid, 2.5e-6, {600e-9, analytic::FluxStrength(0.39), wavefield::BarOrientation::along_x});
  const double L = 1000.0;
  const auto target = propagator::fraunhofer_grid(grid, L, beam.lambda_db());
  for (auto _ : state) {
    auto r = propagator::propagate_fraunhofer(src, {L, target}, beam.lambda_db());
    benchmark::DoNotOptimize(r.field.values().data());
  }
}
BENCHMARK(BM_Fraunhofer2D)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
