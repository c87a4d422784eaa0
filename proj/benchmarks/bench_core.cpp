#include <benchmark/benchmark.h>

#include "symbiotic/certificates.hpp"
#include "symbiotic/freq_analysis.hpp"
#include "symbiotic/linalg.hpp"
#include "symbiotic/simulator.hpp"
#include "symbiotic/sweep.hpp"
#include "symbiotic/system_model.hpp"

namespace {

using namespace symbiotic;
using namespace symbiotic::sweep;

ControlDesign example_design(FixedGainVariant variant = FixedGainVariant::New) {
  RunConfig cfg = example_config();
  cfg.control.variant = variant;
  return ControlDesign(cfg.plant, cfg.gains, cfg.control);
}

// Stable test matrix with a spread of time scales.
Matrix stable_matrix(std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = -1.0 - static_cast<double>(i);
    if (i + 1 < n) a(i, i + 1) = 0.5;
    if (i > 0) a(i, i - 1) = -0.25;
  }
  return a;
}

void BM_SolveLyapunov(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = stable_matrix(n);
  const Matrix r = Matrix::identity(n);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::solve_lyapunov(a, r));
}
BENCHMARK(BM_SolveLyapunov)->Arg(2)->Arg(7)->Arg(14);

void BM_SymEigs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = stable_matrix(n);
  const Matrix s = a + a.transpose();
  for (auto _ : state) benchmark::DoNotOptimize(linalg::sym_eigs(s));
}
BENCHMARK(BM_SymEigs)->Arg(3)->Arg(7)->Arg(14);

void BM_LoopMargins(benchmark::State& state) {
  const LtiSystem loop = open_loop_at_plant_input(example_design());
  const FrequencyGrid grid{1e-3, 1e4, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(loop_margins(loop, grid));
}
BENCHMARK(BM_LoopMargins)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Integrate(benchmark::State& state) {
  const ClosedLoopModel model = assemble_closed_loop(example_design());
  const double t_final = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate(model, FilteredSquareWave{}, ConstantSignal{10.0}, t_final, 1e-3));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_Integrate)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_AssessCertificates(benchmark::State& state) {
  const ControlDesign ds = example_design();
  const ConstantSignal d{10.0};
  for (auto _ : state) benchmark::DoNotOptimize(assess_certificates(ds, d));
}
BENCHMARK(BM_AssessCertificates);

void BM_EvaluatePoint(benchmark::State& state) {
  RunConfig cfg = example_config();
  cfg.t_final = 20.0;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_point(cfg, 10.0, 3.0, 10.0, FixedGainVariant::New));
}
BENCHMARK(BM_EvaluatePoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
