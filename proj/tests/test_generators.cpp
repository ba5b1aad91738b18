#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "lindnet/errors.hpp"
#include "lindnet/generators.hpp"
#include "lindnet/spectral.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace lindnet;
using std::complex;

namespace {

NetworkSpec single_site(double loss, double gain, double dephasing,
                        Statistics statistics = Statistics::Bosonic) {
  NetworkSpec spec;
  spec.hopping = Eigen::MatrixXcd::Zero(1, 1);
  spec.loss = Eigen::VectorXd::Constant(1, loss);
  spec.gain = Eigen::VectorXd::Constant(1, gain);
  spec.dephasing = dephasing;
  spec.statistics = statistics;
  return spec;
}

}  // namespace

TEST_CASE("single-site first-moment generator") {
  CHECK(build_first_moment(single_site(1.0, 0.0, 0.0)).matrix(0, 0) ==
        complex<double>(-0.5, 0.0));
  CHECK(build_first_moment(single_site(1.2, 0.2, 2.0)).matrix(0, 0) ==
        complex<double>(-1.5, 0.0));
}

TEST_CASE("two-site first-moment generator matches direct substitution") {
  ChainBuilder builder;
  builder.n_sites = 2;
  builder.dissipative = {{1, 1.0, 0.0}};
  const auto gen = build_first_moment(build_chain(builder));
  CHECK(gen.matrix(0, 0) == complex<double>(-0.5, 0.0));
  CHECK(gen.matrix(0, 1) == complex<double>(0.0, -1.0));
  CHECK(gen.matrix(1, 0) == complex<double>(0.0, -1.0));
  CHECK(gen.matrix(1, 1) == complex<double>(0.0, 0.0));
}

TEST_CASE("first-moment generator is statistics-independent") {
  NetworkSpec bosonic = single_site(1.2, 0.2, 0.7);
  NetworkSpec fermionic = bosonic;
  fermionic.statistics = Statistics::Fermionic;
  CHECK(build_first_moment(bosonic).matrix ==
        build_first_moment(fermionic).matrix);
}

TEST_CASE("resonance frequencies enter the first-moment diagonal") {
  NetworkSpec spec = single_site(1.0, 0.0, 0.0);
  spec.hopping(0, 0) = 2.0;
  CHECK(build_first_moment(spec).matrix(0, 0) == complex<double>(-0.5, -2.0));
}

TEST_CASE("single-site second-moment generator, bosonic and fermionic") {
  for (double gamma_deph : {0.0, 3.7}) {
    const auto gen = build_second_moment(single_site(1.2, 0.2, gamma_deph));
    CHECK(std::abs(gen.matrix(0, 0) - complex<double>(-1.0, 0.0)) < 1e-15);
    CHECK(gen.source(0) == 0.2);
  }
  const auto ferm = build_second_moment(
      single_site(0.0, 1.0, 0.0, Statistics::Fermionic));
  CHECK(ferm.matrix(0, 0) == complex<double>(-1.0, 0.0));
  CHECK(ferm.source(0) == 1.0);
}

TEST_CASE("dephasing damps only off-diagonal correlations") {
  ChainBuilder builder;
  builder.n_sites = 2;
  builder.dephasing = 3.0;
  const auto gen = build_second_moment(build_chain(builder));
  const Eigen::Index n = 2;
  CHECK(gen.matrix(flatten_index(0, 1, n), flatten_index(0, 1, n)) ==
        complex<double>(-3.0, 0.0));
  CHECK(gen.matrix(flatten_index(1, 0, n), flatten_index(1, 0, n)) ==
        complex<double>(-3.0, 0.0));
  CHECK(gen.matrix(flatten_index(0, 0, n), flatten_index(0, 0, n)) ==
        complex<double>(0.0, 0.0));
  CHECK(gen.matrix(flatten_index(1, 1, n), flatten_index(1, 1, n)) ==
        complex<double>(0.0, 0.0));
}

TEST_CASE("source vector sits on the flattened diagonal") {
  const NetworkSpec spec = test::reference_chain();
  const auto gen = build_second_moment(spec);
  for (Eigen::Index i = 0; i < spec.n_sites(); ++i)
    for (Eigen::Index j = 0; j < spec.n_sites(); ++j)
      CHECK(gen.source(flatten_index(i, j, spec.n_sites())) ==
            (i == j ? spec.gain(i) : 0.0));
}

TEST_CASE("matrix-free action agrees with the dense product") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + static_cast<Eigen::Index>(rng() % 6);
    const NetworkSpec spec = test::random_dense_spec(
        n, rng, trial % 2 ? Statistics::Fermionic : Statistics::Bosonic);
    const auto gen = build_second_moment(spec);
    const Eigen::MatrixXcd c = test::random_hermitian(n, rng);

    Eigen::VectorXcd flat(n * n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        flat(flatten_index(i, j, n)) = c(i, j);
    const Eigen::VectorXcd dense =
        gen.matrix * flat + gen.source.cast<complex<double>>();

    const Eigen::MatrixXcd fast = apply_second_moment(gen, c);
    double scale = std::max(1.0, dense.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        CHECK(std::abs(fast(i, j) - dense(flatten_index(i, j, n))) <=
              1e-12 * scale);
  }
}

TEST_CASE("action matches the literal index-loop oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + static_cast<Eigen::Index>(rng() % 6);
    const NetworkSpec spec = test::random_dense_spec(
        n, rng, trial % 2 ? Statistics::Fermionic : Statistics::Bosonic);
    const auto gen = build_second_moment(spec);
    const Eigen::MatrixXcd c = test::random_hermitian(n, rng);
    const Eigen::MatrixXcd expected = test::naive_second_moment_action(spec, c);
    const Eigen::MatrixXcd got = apply_second_moment(gen, c);
    CHECK((got - expected).cwiseAbs().maxCoeff() <
          1e-12 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("pure gain feeds an empty correlation matrix") {
  const auto gen = build_second_moment(single_site(1.2, 0.2, 0.0));
  const Eigen::MatrixXcd dc =
      apply_second_moment(gen, Eigen::MatrixXcd::Zero(1, 1));
  CHECK(dc(0, 0) == complex<double>(0.2, 0.0));
}

TEST_CASE("only the source survives at zero correlations") {
  const NetworkSpec spec = test::reference_chain();
  const auto gen = build_second_moment(spec);
  const Eigen::MatrixXcd dc = apply_second_moment(
      gen, Eigen::MatrixXcd::Zero(spec.n_sites(), spec.n_sites()));
  for (Eigen::Index i = 0; i < spec.n_sites(); ++i)
    for (Eigen::Index j = 0; j < spec.n_sites(); ++j)
      CHECK(dc(i, j) == complex<double>(i == j ? spec.gain(i) : 0.0, 0.0));
}

TEST_CASE("equilibrium correlations are stationary under the action") {
  const NetworkSpec spec = test::reference_chain(0.25);
  const Eigen::MatrixXcd c_eq = equilibrium(spec).c_eq;
  const Eigen::MatrixXcd dc = apply_second_moment(build_second_moment(spec), c_eq);
  CHECK(dc.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("the action preserves Hermiticity" *
          doctest::description("1000 random spec/matrix pairs")) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + static_cast<Eigen::Index>(rng() % 6);
    const NetworkSpec spec = test::random_dense_spec(
        n, rng, trial % 3 ? Statistics::Bosonic : Statistics::Fermionic);
    const auto gen = build_second_moment(spec);
    const Eigen::MatrixXcd c = test::random_hermitian(n, rng);
    const Eigen::MatrixXcd dc = apply_second_moment(gen, c);
    CHECK((dc - dc.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("coherent part is trace-free without dissipation or dephasing") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 2 + static_cast<Eigen::Index>(rng() % 5);
    NetworkSpec spec;
    spec.hopping = test::random_hermitian(n, rng);
    spec.loss = Eigen::VectorXd::Zero(n);
    spec.gain = Eigen::VectorXd::Zero(n);
    const auto gen = build_second_moment(spec);
    const Eigen::MatrixXcd c = test::random_hermitian(n, rng);
    CHECK(std::abs(apply_second_moment(gen, c).trace()) < 1e-12 * n);
  }
}

TEST_CASE("second-moment eigenvalues pair first-moment ones at zero dephasing") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const NetworkSpec spec = test::random_chain_spec(n, rng);
    const auto lam = spectral_gap(build_first_moment(spec).matrix).spectrum;
    const auto mu = spectral_gap(build_second_moment(spec).matrix).spectrum;
    CHECK(test::multiset_distance(mu, test::pairwise_sums(lam)) < 1e-8);
  }
}

TEST_CASE("valid dissipative specs are strictly stable") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = 2 + static_cast<Eigen::Index>(rng() % 5);
    const NetworkSpec spec = test::random_dense_spec(
        n, rng, trial % 2 ? Statistics::Bosonic : Statistics::Fermionic);
    const auto spectrum = spectral_gap(build_second_moment(spec).matrix).spectrum;
    double max_re = -std::numeric_limits<double>::infinity();
    for (const auto& mu : spectrum) max_re = std::max(max_re, mu.real());
    CHECK(max_re < 0.0);
  }
}

TEST_CASE("dense materialization refuses oversized networks") {
  ChainBuilder builder;
  builder.n_sites = 65;
  builder.dissipative = {{1, 1.0, 0.0}};
  const NetworkSpec spec = build_chain(builder);
  CHECK_THROWS_AS(build_second_moment(spec), ContractViolation);

  SecondMomentOptions opts;
  opts.materialize_dense = false;
  const auto gen = build_second_moment(spec, opts);
  CHECK_FALSE(gen.has_dense());
  const Eigen::MatrixXcd c = Eigen::MatrixXcd::Identity(65, 65);
  CHECK(apply_second_moment(gen, c).allFinite());

  SecondMomentOptions raised;
  raised.max_dense_sites = 65;
  CHECK(build_second_moment(spec, raised).has_dense());
}

TEST_CASE("action rejects shape mismatches") {
  const auto gen = build_second_moment(test::reference_chain());
  CHECK_THROWS_AS(apply_second_moment(gen, Eigen::MatrixXcd::Zero(3, 3)),
                  ContractViolation);
}

TEST_CASE("generators reject invalid specs") {
  const NetworkSpec bad = single_site(0.2, 1.2, 0.0);
  CHECK_THROWS_AS(build_first_moment(bad), InvalidSpec);
  CHECK_THROWS_AS(build_second_moment(bad), InvalidSpec);
}
