#pragma once

#include <cstdint>
#include <vector>

#include "lindnet/network.hpp"

namespace lindnet {

/// Bernoulli-random dissipation on a fixed chain: each site is a trap
/// independently with probability p, with loss gamma and gain
/// gamma * beta_ratio at trap sites.
struct BernoulliEnsembleConfig {
  ChainBuilder base_chain;      // must carry no dissipative entries
  double p = 0.0;               // trap probability
  double gamma = 0.0;           // trap loss rate
  double beta_ratio = 0.0;      // g/gamma = exp(-beta), < 1 for bosons
  int n_realizations = 0;
  std::uint64_t seed = 0;
};

/// Realization `index` of the ensemble. Deterministic function of
/// (seed, index): site n is dissipative iff the counter-based draw keyed by
/// (seed, index, n) falls below p, so realizations are order-independent.
NetworkSpec sample_realization(const BernoulliEnsembleConfig& config,
                               int index);

struct AveragedCurves {
  std::vector<double> gamma_grid;
  std::vector<double> phi_mean, phi_stderr;
  std::vector<double> theta_mean, theta_stderr;
  int realization_count = 0;
  /// Realizations that drew no trap at all; they are retained and
  /// contribute their literal zero rates to the averages.
  int zero_trap_realizations = 0;
};

struct EnsembleOptions {
  int threads = 1;
};

/// Phi and Theta per realization and grid point, averaged across
/// realizations (standard error = sample stddev / sqrt(R)). Realizations
/// fan out across threads; the reduction order is fixed by realization
/// index, so results are bit-identical for any worker count.
AveragedCurves average_curves(const BernoulliEnsembleConfig& config,
                              const std::vector<double>& gamma_grid,
                              const EnsembleOptions& opts = {});

}  // namespace lindnet
