#include "lindnet/classical.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lindnet/errors.hpp"

namespace lindnet {

namespace {

void require_chain(const NetworkSpec& spec, const char* op) {
  const Eigen::Index n = spec.n_sites();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 2; j < n; ++j)
      if (spec.hopping(i, j) != std::complex<double>(0.0, 0.0)) {
        std::ostringstream os;
        os << op << " requires chain (tridiagonal) topology; J(" << i + 1
           << "," << j + 1 << ") is nonzero";
        throw ContractViolation(os.str());
      }
}

}  // namespace

ClassicalModel build_classical(const NetworkSpec& spec) {
  require_valid(spec);
  if (!(spec.dephasing > 0.0))
    throw ContractViolation(
        "classical limit undefined at Gamma = 0: dephasing required");

  const Eigen::Index n = spec.n_sites();
  ClassicalModel model;
  model.rate_matrix = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      model.rate_matrix(i, j) =
          2.0 * std::norm(spec.hopping(i, j)) / spec.dephasing;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    model.rate_matrix(i, i) =
        -model.rate_matrix.row(i).sum() - (spec.loss(i) - spec.gain(i));
  }
  model.source = spec.gain;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.rate_matrix,
                                                     Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw NumericalError("classical rate matrix: eigensolver failed");
  model.gap = eig.eigenvalues().cwiseAbs().minCoeff();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(model.rate_matrix);
  model.p_eq = lu.solve(-model.source);
  const double residual =
      (model.rate_matrix * model.p_eq + model.source).lpNorm<Eigen::Infinity>();
  const double tol = 1e-10 * std::max(1.0, model.source.lpNorm<Eigen::Infinity>());
  if (residual > tol) {
    std::ostringstream os;
    os << "classical model has no stationary state (residual " << residual
       << "): gain feeds a trap-free component";
    throw SingularSystem(os.str(), 0.0);
  }
  const double min_p = model.p_eq.minCoeff();
  if (min_p < -1e-10) {
    std::ostringstream os;
    os << "classical stationary populations are negative (min " << min_p << ")";
    throw NumericalError(os.str());
  }
  return model;
}

IslandDecomposition islands(const NetworkSpec& spec) {
  require_valid(spec);
  require_chain(spec, "island decomposition");

  IslandDecomposition decomposition;
  const Eigen::Index n = spec.n_sites();
  int run_start = 0;  // 1-based start of the current free run, 0 = none
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool free_site = spec.loss(i) == 0.0 && spec.gain(i) == 0.0;
    if (free_site && run_start == 0) run_start = static_cast<int>(i) + 1;
    if (!free_site && run_start != 0) {
      decomposition.islands.push_back({run_start, static_cast<int>(i)});
      run_start = 0;
    }
  }
  if (run_start != 0)
    decomposition.islands.push_back({run_start, static_cast<int>(n)});

  for (const auto& run : decomposition.islands)
    decomposition.l_max = std::max(decomposition.l_max, run.length());
  return decomposition;
}

double lifshitz_asymptote(const NetworkSpec& spec, double gamma_deph) {
  require_valid(spec);
  require_chain(spec, "Lifshitz asymptote");
  if (!(gamma_deph > 0.0))
    throw ContractViolation("Lifshitz asymptote requires gamma_deph > 0");

  const Eigen::Index n = spec.n_sites();
  if (n < 2)
    throw ContractViolation("Lifshitz asymptote requires at least two sites");
  const double j0 = std::abs(spec.hopping(0, 1));
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double ji = std::abs(spec.hopping(i, i + 1));
    if (!(j0 > 0.0) || std::abs(ji - j0) > 1e-12 * j0) {
      std::ostringstream os;
      os << "Lifshitz asymptote requires uniform |J| hopping; |J(" << i + 1
         << "," << i + 2 << ")| = " << ji << " vs |J(1,2)| = " << j0;
      throw ContractViolation(os.str());
    }
  }

  const int l_max = islands(spec).l_max;
  if (l_max < 1)
    throw ContractViolation(
        "Lifshitz asymptote inapplicable: no dissipation-free island");

  const double l1 = static_cast<double>(l_max) + 1.0;
  return 2.0 * std::numbers::pi * std::numbers::pi * j0 * j0 /
         (gamma_deph * l1 * l1);
}

double expected_longest_island(double p, int n_sites, double sigma) {
  if (!(p > 0.0 && p < 1.0))
    throw ContractViolation("expected_longest_island: p must be in (0,1)");
  if (n_sites < 1)
    throw ContractViolation("expected_longest_island: n_sites must be positive");
  if (!(sigma > 0.0))
    throw ContractViolation("expected_longest_island: sigma must be positive");
  const double arg = sigma * p * static_cast<double>(n_sites);
  if (!(arg > 1.0))
    throw ContractViolation(
        "expected_longest_island: sigma * p * N must exceed 1");
  return -std::log(arg) / std::log1p(-p);
}

}  // namespace lindnet
