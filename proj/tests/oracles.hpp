#pragma once

// Test-only oracles, independent of the library's generator assembly and
// integrator code paths.

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "lindnet/network.hpp"

namespace lindnet::test {

/// Literal per-entry evaluation of the correlation equations of motion,
/// written as plain index loops with no flattening or matrix algebra.
inline Eigen::MatrixXcd naive_second_moment_action(const NetworkSpec& spec,
                                                   const Eigen::MatrixXcd& c) {
  const Eigen::Index n = spec.n_sites();
  const std::complex<double> imag_unit{0.0, 1.0};
  const bool fermionic = spec.statistics == Statistics::Fermionic;
  Eigen::MatrixXcd dc = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      std::complex<double> v = 0.0;
      for (Eigen::Index l = 0; l < n; ++l)
        v += -imag_unit *
             (spec.hopping(b, l) * c(a, l) - spec.hopping(l, a) * c(l, b));
      if (a != b) v -= spec.dephasing * c(a, b);
      const double damping =
          fermionic ? (spec.loss(a) + spec.loss(b) + spec.gain(a) + spec.gain(b)) / 2.0
                    : (spec.loss(a) + spec.loss(b) - spec.gain(a) - spec.gain(b)) / 2.0;
      v -= damping * c(a, b);
      if (a == b) v += spec.gain(a);
      dc(a, b) = v;
    }
  }
  return dc;
}

inline std::vector<std::complex<double>> pairwise_sums(
    const std::vector<std::complex<double>>& eigs) {
  std::vector<std::complex<double>> sums;
  sums.reserve(eigs.size() * eigs.size());
  for (const auto& a : eigs)
    for (const auto& b : eigs) sums.push_back(a + b);
  return sums;
}

/// Greedy nearest matching between two complex multisets; returns the
/// largest matched distance (large when the multisets differ).
inline double multiset_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(b[j] - x);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    worst = std::max(worst, best_dist);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

/// Exact solution of x' = B x + g at time t through the eigendecomposition
/// of B (no time stepping involved).
inline Eigen::VectorXcd exact_affine_state(const Eigen::MatrixXcd& b,
                                           const Eigen::VectorXcd& g,
                                           const Eigen::VectorXcd& x0,
                                           double t) {
  const Eigen::VectorXcd x_p = b.fullPivLu().solve(-g);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(b);
  const Eigen::VectorXcd y0 = eig.eigenvectors().fullPivLu().solve(x0 - x_p);
  Eigen::VectorXcd scaled(y0.size());
  for (Eigen::Index i = 0; i < y0.size(); ++i)
    scaled(i) = y0(i) * std::exp(eig.eigenvalues()(i) * t);
  return (eig.eigenvectors() * scaled + x_p).eval();
}

}  // namespace lindnet::test
