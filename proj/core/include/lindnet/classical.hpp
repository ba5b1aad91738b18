#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lindnet/network.hpp"

namespace lindnet {

/// Strong-dephasing description of the network: a classical random walk
/// with incoherent hopping rates 2|J(n,m)|^2 / Gamma and annihilation
/// (trap) rate gamma_n - g_n on dissipative nodes,
///   dP_n/dt = sum_m rate_matrix(n,m) P_m + g_n.
struct ClassicalModel {
  Eigen::MatrixXd rate_matrix;  // symmetric; off-diagonal >= 0
  Eigen::VectorXd source;       // g_n
  double gap = 0.0;             // min |eigenvalue| of rate_matrix
  Eigen::VectorXd p_eq;         // stationary populations
};

/// Requires Gamma > 0 (throws ContractViolation otherwise: the incoherent
/// rates diverge). The gap comes from a symmetric eigensolver; p_eq solves
/// rate_matrix * p = -source and is checked non-negative.
ClassicalModel build_classical(const NetworkSpec& spec);

/// Maximal runs of consecutive dissipation-free sites of a chain.
/// Site indices are 1-based; l_max = 0 when every site is dissipative.
struct IslandDecomposition {
  struct Run {
    int first = 0;
    int last = 0;
    int length() const { return last - first + 1; }
  };
  std::vector<Run> islands;
  int l_max = 0;
};

/// Requires tridiagonal hopping (throws ContractViolation otherwise).
/// Every node with gamma_n > 0 or g_n > 0 counts as a trap, however weak.
IslandDecomposition islands(const NetworkSpec& spec);

/// Decay rate of the longest-lived diffusive mode trapped in the largest
/// dissipation-free island: 2 pi^2 J^2 / (gamma_deph (l_max + 1)^2).
/// Requires a chain with uniform |J| hopping (refuses rather than averaging
/// non-uniform amplitudes), gamma_deph > 0 and l_max >= 1.
double lifshitz_asymptote(const NetworkSpec& spec, double gamma_deph);

/// Extreme-value estimate of the longest trap-free run when each of
/// n_sites is a trap independently with probability p:
///   -ln(sigma p N) / ln(1 - p),
/// valid for 0 < p < 1 and sigma*p*N > 1. Returns the real-valued estimate
/// without rounding.
double expected_longest_island(double p, int n_sites, double sigma);

}  // namespace lindnet
