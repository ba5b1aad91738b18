#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lindnet/ensemble.hpp"
#include "lindnet/errors.hpp"
#include "lindnet/rng.hpp"
#include "lindnet/spectral.hpp"
#include "testutil.hpp"

using namespace lindnet;

namespace {

BernoulliEnsembleConfig small_config(int n_sites, double p, int realizations,
                                     std::uint64_t seed) {
  BernoulliEnsembleConfig config;
  config.base_chain.n_sites = n_sites;
  config.base_chain.hop_rate = 1.0;
  config.p = p;
  config.gamma = 1.2;
  config.beta_ratio = 1.0 / 6.0;
  config.n_realizations = realizations;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("counter draws are pure functions of (seed, stream, counter)") {
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 3, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(2, 2, 3));
  for (int i = 0; i < 100; ++i) {
    const double u = counter_uniform(42, 7, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("degenerate trap probabilities") {
  auto config = small_config(21, 0.0, 3, 9);
  CHECK(dissipative_sites(sample_realization(config, 0)).empty());
  config.p = 1.0;
  CHECK(dissipative_sites(sample_realization(config, 1)).size() == 21);
}

TEST_CASE("realizations are deterministic and order-independent") {
  const auto config = small_config(21, 0.3, 10, 1234);
  const NetworkSpec early = sample_realization(config, 7);
  for (int i = 0; i < 5; ++i) sample_realization(config, i);
  const NetworkSpec late = sample_realization(config, 7);
  CHECK(early.loss == late.loss);
  CHECK(early.gain == late.gain);
}

TEST_CASE("trap counts follow binomial statistics") {
  const auto config = small_config(21, 0.2, 100, 42);
  double total = 0.0;
  for (int r = 0; r < config.n_realizations; ++r)
    total += static_cast<double>(
        dissipative_sites(sample_realization(config, r)).size());
  const double mean = total / config.n_realizations;
  CHECK(std::abs(mean - 4.2) <= 1.5);  // 3-sigma binomial band
}

TEST_CASE("sampled realizations carry the configured trap rates") {
  const auto config = small_config(21, 0.4, 4, 77);
  const NetworkSpec spec = sample_realization(config, 2);
  CHECK(validate(spec).ok());
  for (int site : dissipative_sites(spec)) {
    CHECK(spec.loss(site - 1) == 1.2);
    CHECK(spec.gain(site - 1) == doctest::Approx(0.2).epsilon(1e-15));
  }
}

TEST_CASE("configuration contracts") {
  auto config = small_config(10, 0.5, 4, 1);
  config.base_chain.dissipative = {{1, 1.0, 0.0}};
  CHECK_THROWS_AS(sample_realization(config, 0), ContractViolation);

  config = small_config(10, 0.5, 4, 1);
  config.beta_ratio = 1.0;
  CHECK_THROWS_AS(sample_realization(config, 0), ContractViolation);

  config = small_config(10, 0.5, 4, 1);
  CHECK_THROWS_AS(sample_realization(config, 4), ContractViolation);
  CHECK_THROWS_AS(sample_realization(config, -1), ContractViolation);

  config.gamma = 0.0;
  CHECK_THROWS_AS(sample_realization(config, 0), ContractViolation);
}

TEST_CASE("averaged curves are bit-identical across worker counts") {
  const auto config = small_config(10, 0.35, 8, 2024);
  const std::vector<double> grid = {0.0, 0.5, 2.0, 10.0};
  const AveragedCurves serial = average_curves(config, grid, {.threads = 1});
  const AveragedCurves threaded = average_curves(config, grid, {.threads = 3});
  const AveragedCurves again = average_curves(config, grid, {.threads = 3});
  CHECK(serial.phi_mean == threaded.phi_mean);
  CHECK(serial.theta_mean == threaded.theta_mean);
  CHECK(serial.phi_stderr == threaded.phi_stderr);
  CHECK(serial.theta_stderr == threaded.theta_stderr);
  CHECK(threaded.theta_mean == again.theta_mean);
  CHECK(serial.realization_count == 8);
}

TEST_CASE("standard errors are nonnegative and vanish for one realization") {
  const auto config = small_config(8, 0.4, 1, 5);
  const AveragedCurves curves = average_curves(config, {0.0, 1.0});
  for (double s : curves.theta_stderr) CHECK(s == 0.0);
  const auto config2 = small_config(8, 0.4, 5, 5);
  const AveragedCurves curves2 = average_curves(config2, {0.0, 1.0});
  for (double s : curves2.theta_stderr) CHECK(s >= 0.0);
}

TEST_CASE("zero-trap realizations are retained and counted") {
  const auto config = small_config(8, 0.05, 40, 31);
  int expected = 0;
  for (int r = 0; r < config.n_realizations; ++r)
    if (dissipative_sites(sample_realization(config, r)).empty()) ++expected;
  REQUIRE(expected > 0);  // p = 0.05 on 8 sites: ~26 of 40 expected
  const AveragedCurves curves = average_curves(config, {0.0, 1.0});
  CHECK(curves.zero_trap_realizations == expected);
}

TEST_CASE("stochastic dissipation relaxes faster than the dark-state chain "
          "at zero dephasing") {
  const auto config = small_config(21, 0.2, 20, 42);
  const AveragedCurves curves = average_curves(config, {0.0});
  const double deterministic_theta = theta_of_gamma(test::reference_chain());
  CHECK(curves.theta_mean[0] > deterministic_theta);
}

TEST_CASE("grid validation") {
  const auto config = small_config(8, 0.4, 2, 5);
  CHECK_THROWS_AS(average_curves(config, {}), ContractViolation);
  CHECK_THROWS_AS(average_curves(config, {0.0, 0.0}), ContractViolation);
  CHECK_THROWS_AS(average_curves(config, {-1.0, 1.0}), ContractViolation);
}
