#include <benchmark/benchmark.h>

#include "gwtails/direct_density.hpp"
#include "gwtails/karlin.hpp"
#include "gwtails/left_tail.hpp"
#include "gwtails/presets.hpp"
#include "gwtails/right_tail.hpp"

using gwt::Complex;

namespace {
const gwt::RationalPGF& model() {
  static auto m = gwt::preset_model("example1");
  return m;
}
const gwt::ConjugacyEvaluator& evaluator() {
  static gwt::ConjugacyEvaluator ev(model());
  return ev;
}
}  // namespace

static void BM_PiSampleLine(benchmark::State& state) {
  gwt::QuadratureConfig qc{100.0, 2 * state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(gwt::sample_pi_line(evaluator(), qc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PiSampleLine)->Range(1024, 65536);

static void BM_IntegralAssembly(benchmark::State& state) {
  const auto line = gwt::sample_pi_line(evaluator(), gwt::QuadratureConfig{2000.0, 200000});
  std::vector<double> xs;
  for (int i = 1; i <= 30; ++i) xs.push_back(0.1 * i);
  for (auto _ : state) benchmark::DoNotOptimize(gwt::density_integral(line, xs));
}
BENCHMARK(BM_IntegralAssembly);

static void BM_ThetaTable(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(gwt::theta_star(evaluator(), 6, 12, 2.9, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ThetaTable)->Range(4096, 32768);

static void BM_EnumeratePoles(benchmark::State& state) {
  gwt::EnumerationConfig ec;
  ec.r_max = double(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gwt::enumerate_poles(evaluator(), ec));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnumeratePoles)->Range(32, 256);

static void BM_RightTailGrid(benchmark::State& state) {
  gwt::EnumerationConfig ec;
  ec.r_max = 200.0;
  const auto en = gwt::enumerate_poles(evaluator(), ec);
  std::vector<double> xs;
  for (int i = 1; i <= 30; ++i) xs.push_back(0.1 * i);
  for (auto _ : state) benchmark::DoNotOptimize(gwt::density_right(en, xs));
}
BENCHMARK(BM_RightTailGrid);

static void BM_LeftTailGrid(benchmark::State& state) {
  auto cfg = gwt::LeftTailConfig::for_model(model(), 20, 40);
  cfg.convergence_tol = 5e-2;  // desk-scale truncation target
  const auto kappa = gwt::phi_inverse_coeffs(model(), 20, 1.0 / 5.3);
  const auto theta = gwt::theta_star(evaluator(), 20, 40, 2.9, 20000);
  std::vector<double> xs;
  for (int i = 1; i <= 30; ++i) xs.push_back(0.1 * i);
  for (auto _ : state)
    benchmark::DoNotOptimize(gwt::density_left(model(), kappa, theta, cfg, xs));
}
BENCHMARK(BM_LeftTailGrid);

BENCHMARK_MAIN();
