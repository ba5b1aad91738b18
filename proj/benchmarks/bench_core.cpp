// Microbenchmarks for the hot paths: generator assembly, dense spectra,
// equilibrium solves and integrator steps on the 21-site reference chain.

#include <benchmark/benchmark.h>

#include "lindnet/classical.hpp"
#include "lindnet/dynamics.hpp"
#include "lindnet/generators.hpp"
#include "lindnet/spectral.hpp"

namespace {

lindnet::NetworkSpec reference_chain(double dephasing) {
  lindnet::ChainBuilder builder;
  builder.n_sites = 21;
  builder.hop_rate = 1.0;
  builder.dissipative = {{2, 1.2, 0.2}, {6, 1.2, 0.2}, {8, 1.2, 0.2},
                         {20, 1.2, 0.2}, {1, 0.06, 0.01}};
  builder.dephasing = dephasing;
  return lindnet::build_chain(builder);
}

void BM_BuildSecondMoment(benchmark::State& state) {
  const auto spec = reference_chain(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(lindnet::build_second_moment(spec));
}
BENCHMARK(BM_BuildSecondMoment);

void BM_ThetaOfGamma(benchmark::State& state) {
  const auto spec = reference_chain(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(lindnet::theta_of_gamma(spec));
}
BENCHMARK(BM_ThetaOfGamma)->Unit(benchmark::kMillisecond);

void BM_Equilibrium(benchmark::State& state) {
  const auto spec = reference_chain(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(lindnet::equilibrium(spec));
}
BENCHMARK(BM_Equilibrium)->Unit(benchmark::kMillisecond);

void BM_ClassicalGap(benchmark::State& state) {
  const auto spec = reference_chain(100.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(lindnet::build_classical(spec));
}
BENCHMARK(BM_ClassicalGap);

void BM_IntegrateUnitTime(benchmark::State& state) {
  const auto spec = reference_chain(1.0);
  const Eigen::Index n = spec.n_sites();
  const Eigen::VectorXcd a0 = Eigen::VectorXcd::Zero(n);
  const Eigen::MatrixXcd c0 = Eigen::MatrixXcd::Identity(n, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(lindnet::integrate(spec, a0, c0, 1.0, 0.05));
}
BENCHMARK(BM_IntegrateUnitTime)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
