#pragma once

#include <Eigen/Dense>

#include "lindnet/network.hpp"

namespace lindnet {

/// Generator of the mean-amplitude dynamics dA/dt = M A with
///   M(n,m) = -i J(n,m)                                  for n != m,
///   M(n,n) = -i J(n,n) - (gamma_n + Gamma - g_n) / 2.
/// The same matrix applies to bosonic and fermionic statistics.
struct FirstMomentGenerator {
  Eigen::MatrixXcd matrix;
};

FirstMomentGenerator build_first_moment(const NetworkSpec& spec);

/// Row-major flattening of correlation indices, 0-based: (n, m) -> n*N + m.
/// Equivalent to the 1-based (n-1)*N + (m-1). Fixed project-wide.
inline Eigen::Index flatten_index(Eigen::Index n, Eigen::Index m,
                                  Eigen::Index n_sites) {
  return n * n_sites + m;
}

struct SecondMomentOptions {
  /// Dense materialization is refused above this site count
  /// (default 64 sites = a 4096 x 4096 complex matrix).
  Eigen::Index max_dense_sites = 64;
  /// Skip the dense matrix and keep only the matrix-free ingredients
  /// (what the time integrator uses).
  bool materialize_dense = true;
};

/// Generator of the correlation-matrix dynamics, flattened row-major:
/// dC/dt = B C + G. Per entry,
///   dC(n,m)/dt = -i sum_l [ J(m,l) C(n,l) - J(l,n) C(l,m) ]
///                - [ Gamma (1 - delta_nm) + damping(n,m) ] C(n,m)
///                + g_n delta_nm,
/// with damping (gamma_n+gamma_m-g_n-g_m)/2 for bosons and
/// (gamma_n+gamma_m+g_n+g_m)/2 for fermions; the fermionic gain carries a
/// damping sign, which is what makes that case stable for any gain/loss
/// balance. Dephasing touches only off-diagonal correlations.
struct SecondMomentGenerator {
  Eigen::MatrixXcd matrix;      // N^2 x N^2 dense; empty when not materialized
  Eigen::VectorXd source;       // N^2, source(flatten(n,n)) = g_n
  Statistics statistics = Statistics::Bosonic;

  // Ingredients of the matrix-free action, shared with the integrator.
  Eigen::MatrixXcd hopping_t;   // J^T
  Eigen::MatrixXcd decay_mask;  // Gamma(1-delta_nm) + damping(n,m)
  Eigen::VectorXd gain;

  Eigen::Index n_sites() const { return hopping_t.rows(); }
  bool has_dense() const { return matrix.size() > 0; }
};

SecondMomentGenerator build_second_moment(const NetworkSpec& spec,
                                          const SecondMomentOptions& opts = {});

/// Evaluates dC/dt = i (J^T c - c J^T) - mask .* c + diag(g) without touching
/// the dense matrix; agrees with unflatten(B * flatten(c) + G) to 1e-12
/// relative. Throws ContractViolation on shape mismatch.
Eigen::MatrixXcd apply_second_moment(const SecondMomentGenerator& gen,
                                     const Eigen::MatrixXcd& c);

}  // namespace lindnet
