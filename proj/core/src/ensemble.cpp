#include "lindnet/ensemble.hpp"

#include <cmath>
#include <sstream>

#include "lindnet/errors.hpp"
#include "lindnet/rng.hpp"
#include "lindnet/spectral.hpp"
#include "parallel.hpp"

namespace lindnet {

namespace {

void validate_config(const BernoulliEnsembleConfig& config) {
  if (!config.base_chain.dissipative.empty())
    throw ContractViolation("ensemble base chain must be dissipation-free");
  if (config.base_chain.n_sites < 1)
    throw ContractViolation("ensemble base chain has no sites");
  if (!(config.p >= 0.0 && config.p <= 1.0))
    throw ContractViolation("ensemble trap probability outside [0,1]");
  if (!(config.gamma > 0.0))
    throw ContractViolation("ensemble trap loss rate must be positive");
  if (config.base_chain.statistics == Statistics::Bosonic &&
      !(config.beta_ratio >= 0.0 && config.beta_ratio < 1.0))
    throw ContractViolation(
        "ensemble g/gamma ratio must lie in [0,1) for bosonic stability");
  if (config.n_realizations < 1)
    throw ContractViolation("ensemble needs at least one realization");
}

}  // namespace

NetworkSpec sample_realization(const BernoulliEnsembleConfig& config,
                               int index) {
  validate_config(config);
  if (index < 0 || index >= config.n_realizations) {
    std::ostringstream os;
    os << "realization index " << index << " outside 0.."
       << config.n_realizations - 1;
    throw ContractViolation(os.str());
  }

  ChainBuilder builder = config.base_chain;
  for (int node = 1; node <= builder.n_sites; ++node) {
    const double u = counter_uniform(config.seed,
                                     static_cast<std::uint64_t>(index),
                                     static_cast<std::uint64_t>(node - 1));
    if (u < config.p)
      builder.dissipative.push_back(
          {node, config.gamma, config.gamma * config.beta_ratio});
  }
  return build_chain(builder);
}

AveragedCurves average_curves(const BernoulliEnsembleConfig& config,
                              const std::vector<double>& gamma_grid,
                              const EnsembleOptions& opts) {
  validate_config(config);
  if (gamma_grid.empty())
    throw ContractViolation("ensemble gamma grid is empty");
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (gamma_grid[i] < 0.0 ||
        (i > 0 && gamma_grid[i] <= gamma_grid[i - 1]))
      throw ContractViolation(
          "ensemble gamma grid must be strictly increasing and nonnegative");
  }

  const int R = config.n_realizations;
  const std::size_t G = gamma_grid.size();
  std::vector<std::vector<double>> phi(R), theta(R);
  std::vector<char> zero_trap(R, 0);

  detail::parallel_for_index(R, opts.threads, [&](int r) {
    const NetworkSpec base = sample_realization(config, r);
    zero_trap[r] = dissipative_sites(base).empty() ? 1 : 0;
    phi[r].resize(G);
    theta[r].resize(G);
    for (std::size_t i = 0; i < G; ++i) {
      const NetworkSpec spec = with_dephasing(base, gamma_grid[i]);
      phi[r][i] = phi_of_gamma(spec);
      theta[r][i] = theta_of_gamma(spec);
    }
  });

  AveragedCurves curves;
  curves.gamma_grid = gamma_grid;
  curves.realization_count = R;
  for (int r = 0; r < R; ++r) curves.zero_trap_realizations += zero_trap[r];

  curves.phi_mean.assign(G, 0.0);
  curves.phi_stderr.assign(G, 0.0);
  curves.theta_mean.assign(G, 0.0);
  curves.theta_stderr.assign(G, 0.0);
  for (std::size_t i = 0; i < G; ++i) {
    double phi_sum = 0.0, theta_sum = 0.0;
    for (int r = 0; r < R; ++r) {
      phi_sum += phi[r][i];
      theta_sum += theta[r][i];
    }
    curves.phi_mean[i] = phi_sum / R;
    curves.theta_mean[i] = theta_sum / R;
    if (R > 1) {
      double phi_ss = 0.0, theta_ss = 0.0;
      for (int r = 0; r < R; ++r) {
        const double dp = phi[r][i] - curves.phi_mean[i];
        const double dt = theta[r][i] - curves.theta_mean[i];
        phi_ss += dp * dp;
        theta_ss += dt * dt;
      }
      curves.phi_stderr[i] = std::sqrt(phi_ss / (R - 1)) / std::sqrt(double(R));
      curves.theta_stderr[i] =
          std::sqrt(theta_ss / (R - 1)) / std::sqrt(double(R));
    }
  }
  return curves;
}

}  // namespace lindnet
