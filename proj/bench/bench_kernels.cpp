#include <benchmark/benchmark.h>

#include <random>

#include "enzq/dynamics.hpp"
#include "enzq/gate.hpp"
#include "enzq/metrics.hpp"

using namespace enzq;

namespace {

CouplingMatrices random_couplings(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  RMatrix b(n, n);
  for (auto& x : b.reshaped()) x = normal(rng);
  CouplingMatrices c;
  c.gamma = b * b.transpose() / static_cast<double>(n) + RMatrix::Identity(n, n);
  c.g = RMatrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) c.g(i, j) = c.g(j, i) = normal(rng);
  }
  return c;
}

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::Serial : ExecPolicy::Parallel;
}

void policy_label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_FullLindbladRhs(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto c = random_couplings(n, rng);
  const std::size_t dim = std::size_t{1} << n;
  CMatrix rho = CMatrix::Random(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  rho = (rho * rho.adjoint()).eval();
  rho /= rho.trace();
  for (auto _ : state) benchmark::DoNotOptimize(full_lindblad_rhs(rho, c, policy_of(state)));
  policy_label(state);
}
BENCHMARK(BM_FullLindbladRhs)->ArgsProduct({{0, 1}, {4, 5, 6}});

void BM_MetricsTimeseries(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto c = random_couplings(n, rng);
  IntegrationOptions opts;
  opts.t_max = 10.0 / c.gamma_max();
  opts.sample_stride = 20;
  const auto res = integrate(SingleExcitationState::excited(n, 1), c, opts);
  for (auto _ : state) benchmark::DoNotOptimize(metrics_timeseries(res, 1.0, policy_of(state)));
  policy_label(state);
}
BENCHMARK(BM_MetricsTimeseries)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond);

void BM_FidelityVsDistance(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 0; i < 99; ++i) grid.push_back((20.0 + 10.0 * i) * 1e-9);
  const GateEnvironment env = FreeSpaceGate{};
  for (auto _ : state) benchmark::DoNotOptimize(fidelity_vs_distance(env, grid, policy_of(state)));
  policy_label(state);
}
BENCHMARK(BM_FidelityVsDistance)->ArgsProduct({{0, 1}, {0}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
