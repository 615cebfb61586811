#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "enzq/dynamics.hpp"
#include "enzq/gate.hpp"
#include "enzq/metrics.hpp"
#include "enzq/parallel.hpp"
#include "random_inputs.hpp"

using namespace enzq;

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), ExecPolicy::Parallel, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(ParallelFor, RethrowsTheLowestFailingIndex) {
  for (auto policy : {ExecPolicy::Serial, ExecPolicy::Parallel}) {
    try {
      parallel_for(100, policy, [](std::size_t i) {
        if (i == 17 || i == 63) throw std::runtime_error(std::to_string(i));
      });
      FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "17");
    }
  }
}

TEST(SerialParallel, FullLindbladIsBitIdentical) {
  std::mt19937_64 rng(51);
  for (std::size_t n : {2u, 4u, 6u}) {
    const auto c = fixtures::random_couplings(n, rng);
    const CMatrix rho = fixtures::random_pure_state(n, rng);
    EXPECT_EQ(full_lindblad_rhs(rho, c, ExecPolicy::Serial), full_lindblad_rhs(rho, c, ExecPolicy::Parallel));
  }
}

TEST(SerialParallel, MetricsTimeseriesIsBitIdentical) {
  std::mt19937_64 rng(52);
  const auto c = fixtures::random_couplings(4, rng);
  IntegrationOptions opts;
  opts.t_max = 5.0 / c.gamma_max();
  opts.sample_stride = 100;
  const auto res = integrate(SingleExcitationState::excited(4, 1), c, opts);
  const auto a = metrics_timeseries(res, 1.0, ExecPolicy::Serial);
  const auto b = metrics_timeseries(res, 1.0, ExecPolicy::Parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].negativity, b[k].negativity);
    EXPECT_EQ(a[k].e_g2, b[k].e_g2);
    EXPECT_EQ(a[k].populations, b[k].populations);
    EXPECT_EQ(a[k].time, b[k].time);
  }
}

TEST(SerialParallel, FidelitySweepIsBitIdentical) {
  std::vector<double> grid;
  for (int i = 1; i <= 500; ++i) grid.push_back(4e-9 * i);
  for (const GateEnvironment& env :
       {GateEnvironment{FreeSpaceGate{}}, GateEnvironment{EnzPassiveGate{1e11, 5e-6}},
        GateEnvironment{EnzActiveGate{1e11, 5e-6, 1.0, 200e-9}}}) {
    const auto a = fidelity_vs_distance(env, grid, ExecPolicy::Serial);
    const auto b = fidelity_vs_distance(env, grid, ExecPolicy::Parallel);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_EQ(a[i].fidelity, b[i].fidelity);
      EXPECT_EQ(a[i].gamma12, b[i].gamma12);
    }
  }
}
