#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lindnet/classical.hpp"
#include "lindnet/errors.hpp"
#include "testutil.hpp"

using namespace lindnet;

// Rate-matrix gaps for the 21-site reference chain, computed independently.
namespace frozen {
constexpr double classical_gap_50 = 0.0026907783966813674;
constexpr double classical_gap_200 = 0.00067925969282947596;
constexpr double theta_100 = 0.0013518674130871874;
}  // namespace frozen

TEST_CASE("two sites without traps: conserved walker") {
  ChainBuilder builder;
  builder.n_sites = 2;
  builder.dephasing = 10.0;
  const ClassicalModel model = build_classical(build_chain(builder));
  CHECK(model.rate_matrix(0, 1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(model.rate_matrix(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(model.gap == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(model.p_eq.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single trapped site balances gain against net loss") {
  NetworkSpec spec;
  spec.hopping = Eigen::MatrixXcd::Zero(1, 1);
  spec.loss = Eigen::VectorXd::Constant(1, 1.2);
  spec.gain = Eigen::VectorXd::Constant(1, 0.2);
  spec.dephasing = 1.0;
  const ClassicalModel model = build_classical(spec);
  CHECK(model.gap == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(model.p_eq(0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("classical limit refuses zero dephasing") {
  CHECK_THROWS_WITH_AS(build_classical(test::reference_chain(0.0)),
                       doctest::Contains("dephasing required"),
                       ContractViolation);
}

TEST_CASE("reference-chain classical gaps match frozen values") {
  CHECK(build_classical(test::reference_chain(50.0)).gap ==
        doctest::Approx(frozen::classical_gap_50).epsilon(1e-10));
  CHECK(build_classical(test::reference_chain(200.0)).gap ==
        doctest::Approx(frozen::classical_gap_200).epsilon(1e-10));
}

TEST_CASE("classical gap approximates theta deep in the dephasing regime") {
  const ClassicalModel model = build_classical(test::reference_chain(100.0));
  CHECK(std::abs(model.gap / frozen::theta_100 - 1.0) < 0.1);
}

TEST_CASE("trap-free rate matrix annihilates the uniform vector") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    NetworkSpec spec = test::random_chain_spec(6, rng, false, 5.0);
    spec.loss.setZero();
    spec.gain.setZero();
    const ClassicalModel model = build_classical(spec);
    CHECK((model.rate_matrix * Eigen::VectorXd::Ones(6)).lpNorm<Eigen::Infinity>() <
          1e-12);
    CHECK((model.rate_matrix - model.rate_matrix.transpose())
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("with traps present every classical mode decays") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkSpec spec = test::random_chain_spec(6, rng, true, 2.0);
    const ClassicalModel model = build_classical(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.rate_matrix,
                                                       Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().maxCoeff() < 0.0);
    CHECK(model.p_eq.minCoeff() > -1e-12);
  }
}

TEST_CASE("island decomposition of the reference chain") {
  const IslandDecomposition d = islands(test::reference_chain());
  REQUIRE(d.islands.size() == 4);
  CHECK(d.islands[0].first == 3);
  CHECK(d.islands[0].last == 5);
  CHECK(d.islands[1].first == 7);
  CHECK(d.islands[1].last == 7);
  CHECK(d.islands[2].first == 9);
  CHECK(d.islands[2].last == 19);
  CHECK(d.islands[3].first == 21);
  CHECK(d.islands[3].last == 21);
  CHECK(d.l_max == 11);
}

TEST_CASE("island decomposition degenerate cases") {
  ChainBuilder builder;
  builder.n_sites = 5;
  const IslandDecomposition all_free = islands(build_chain(builder));
  REQUIRE(all_free.islands.size() == 1);
  CHECK(all_free.islands[0].first == 1);
  CHECK(all_free.islands[0].last == 5);
  CHECK(all_free.l_max == 5);

  builder.dissipative = {{1, 1.0, 0.0}, {2, 1.0, 0.0}, {3, 1.0, 0.0},
                         {4, 1.0, 0.0}, {5, 1.0, 0.0}};
  const IslandDecomposition none_free = islands(build_chain(builder));
  CHECK(none_free.islands.empty());
  CHECK(none_free.l_max == 0);
}

TEST_CASE("islands and the asymptote require chain topology") {
  std::mt19937_64 rng(7);
  NetworkSpec spec;
  spec.hopping = test::random_hermitian(4, rng);
  spec.loss = Eigen::VectorXd::Zero(4);
  spec.gain = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(islands(spec), ContractViolation);
  CHECK_THROWS_AS(lifshitz_asymptote(spec, 10.0), ContractViolation);
}

TEST_CASE("Lifshitz asymptote formula and 1/Gamma scaling") {
  const NetworkSpec spec = test::reference_chain(100.0);
  const double expected =
      2.0 * std::numbers::pi * std::numbers::pi / (100.0 * 144.0);
  CHECK(lifshitz_asymptote(spec, 100.0) ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(lifshitz_asymptote(spec, 200.0) ==
        doctest::Approx(expected / 2.0).epsilon(1e-14));
}

TEST_CASE("Lifshitz asymptote contract violations") {
  const NetworkSpec spec = test::reference_chain();
  CHECK_THROWS_AS(lifshitz_asymptote(spec, 0.0), ContractViolation);

  std::mt19937_64 rng(11);
  const NetworkSpec nonuniform = test::random_chain_spec(6, rng);
  CHECK_THROWS_WITH_AS(lifshitz_asymptote(nonuniform, 10.0),
                       doctest::Contains("uniform"), ContractViolation);

  ChainBuilder builder;
  builder.n_sites = 3;
  builder.dissipative = {{1, 1.0, 0.0}, {2, 1.0, 0.0}, {3, 1.0, 0.0}};
  CHECK_THROWS_WITH_AS(lifshitz_asymptote(build_chain(builder), 10.0),
                       doctest::Contains("island"), ContractViolation);
}

TEST_CASE("expected longest island: formula values") {
  CHECK(expected_longest_island(0.2, 21, 2.5) ==
        doctest::Approx(10.537500381772148).epsilon(1e-12));
  CHECK(expected_longest_island(0.5, 16, 1.0) ==
        doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("dense traps leave almost no island") {
  const double near_one = expected_longest_island(0.99, 21, 1.0);
  CHECK(near_one > 0.0);
  CHECK(near_one < 0.7);
  CHECK(expected_longest_island(0.999, 21, 1.0) < near_one);
}

TEST_CASE("expected longest island: parameter domain") {
  CHECK_THROWS_AS(expected_longest_island(0.0, 21, 2.5), ContractViolation);
  CHECK_THROWS_AS(expected_longest_island(1.0, 21, 2.5), ContractViolation);
  CHECK_THROWS_AS(expected_longest_island(0.2, 21, -1.0), ContractViolation);
  CHECK_THROWS_AS(expected_longest_island(0.01, 21, 1.0), ContractViolation);
  CHECK_THROWS_AS(expected_longest_island(0.2, 0, 2.5), ContractViolation);
}
