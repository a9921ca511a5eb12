#include <benchmark/benchmark.h>

#include "gwtails/conjugacy.hpp"
#include "gwtails/presets.hpp"

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

static void BM_PiEval(benchmark::State& state) {
  const Complex z(-1.3, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator().pi_eval(z));
}
BENCHMARK(BM_PiEval);

static void BM_PiEvalLargeArgument(benchmark::State& state) {
  const Complex z(0.0, double(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluator().pi_eval(z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PiEvalLargeArgument)->Range(16, 16384);

static void BM_PiEvalWithDerivative(benchmark::State& state) {
  const Complex z(-1.3, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator().pi_eval_d(z));
}
BENCHMARK(BM_PiEvalWithDerivative);

static void BM_PhiEval(benchmark::State& state) {
  const Complex z(0.4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator().phi_eval(z));
}
BENCHMARK(BM_PhiEval);

static void BM_PiInverse(benchmark::State& state) {
  const Complex w(3.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator().pi_inverse(w));
}
BENCHMARK(BM_PiInverse);

static void BM_KappaTable(benchmark::State& state) {
  const int m_max = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(gwt::phi_inverse_coeffs(model(), m_max, 1.0 / 5.3));
  state.SetComplexityN(m_max);
}
BENCHMARK(BM_KappaTable)->Range(8, 64)->Complexity();
