#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lindnet {

enum class Statistics { Bosonic, Fermionic };

const char* to_string(Statistics s);

/// A dissipative network of coherently coupled modes: Hermitian hopping
/// matrix J (diagonal entries are resonance frequencies), per-node loss and
/// gain rates, and a uniform dephasing rate.
///
/// All rates are plain numbers in units of `reference_rate` (for chains,
/// the nearest-neighbor hop rate). Node indices are 1-based in every
/// user-facing interface and 0-based in storage.
///
/// Instances are treated as immutable after construction and are safe to
/// share across threads.
struct NetworkSpec {
  Eigen::MatrixXcd hopping;   // N x N, J(n,m) = conj(J(m,n))
  Eigen::VectorXd loss;       // gamma_n >= 0
  Eigen::VectorXd gain;       // g_n >= 0
  double dephasing = 0.0;     // Gamma >= 0
  Statistics statistics = Statistics::Bosonic;
  double reference_rate = 1.0;

  Eigen::Index n_sites() const { return hopping.rows(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string joined() const;
};

/// Checks shape consistency, Hermiticity (absolute tolerance 1e-12 on every
/// entry pair), finiteness and non-negativity of all rates, and the bosonic
/// stability condition g_n < gamma_n at every node carrying gain. An empty
/// report means the spec is valid. Fermionic specs are stable for any
/// gain/loss balance, so no stability check applies to them.
ValidationReport validate(const NetworkSpec& spec);

/// Throws InvalidSpec listing all violations if validate() reports any.
void require_valid(const NetworkSpec& spec);

/// Copy with hopping replaced by (J + J^dagger)/2. Applied to file-parsed
/// inputs after the Hermiticity check passes, so round-off asymmetry never
/// propagates into the generators.
NetworkSpec symmetrized(NetworkSpec spec);

/// 1-based indices of the dissipative nodes (gamma_n > 0 or g_n > 0).
/// Always derived from the rate vectors, never stored separately.
std::vector<int> dissipative_sites(const NetworkSpec& spec);

/// Copy with a different dephasing rate (everything else shared).
NetworkSpec with_dephasing(NetworkSpec spec, double gamma);

/// Builder for a uniform open chain: tridiagonal real hopping with
/// off-diagonal hop_rate and zero diagonal, loss/gain at the named nodes.
struct ChainBuilder {
  struct NodeRates {
    int node = 0;   // 1-based site index
    double loss = 0.0;
    double gain = 0.0;
  };

  int n_sites = 0;
  double hop_rate = 1.0;
  std::vector<NodeRates> dissipative;
  double dephasing = 0.0;
  Statistics statistics = Statistics::Bosonic;
};

/// Throws ContractViolation for site indices outside 1..n_sites or
/// duplicate entries; the produced spec has reference_rate = hop_rate.
NetworkSpec build_chain(const ChainBuilder& builder);

struct Eigenstate {
  double energy = 0.0;
  Eigen::VectorXcd vector;
};

/// Full orthonormal eigendecomposition of the hopping matrix, ascending in
/// energy. For the uniform open chain the eigenvectors are the standing
/// waves with components proportional to sin(pi l n / (N+1)).
std::vector<Eigenstate> standing_wave_eigenstates(const NetworkSpec& spec);

}  // namespace lindnet
