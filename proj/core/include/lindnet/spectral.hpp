#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lindnet/network.hpp"

namespace lindnet {

/// Relaxation-rate readout of a generator spectrum. The gap is the smallest
/// |Re(eigenvalue)| over the full spectrum; an exact zero eigenvalue yields
/// gap 0 and is reported, never skipped.
struct GapResult {
  double gap = 0.0;
  std::complex<double> achieving_eigenvalue;
  /// Sorted ascending by |Re|, ties broken by ascending Im, then by
  /// ascending modulus (deterministic ordering for golden outputs).
  std::vector<std::complex<double>> spectrum;
  /// gap < 1e-12: a non-relaxing mode is present (e.g. an exact dark state).
  bool non_relaxing = false;
};

/// Dense nonsymmetric eigendecomposition (eigenvalues only).
GapResult spectral_gap(const Eigen::MatrixXcd& matrix);

/// Relaxation rate of the mean amplitudes: spectral gap of the
/// first-moment generator. Grows as Gamma/2 with the dephasing rate.
double phi_of_gamma(const NetworkSpec& spec);

/// Relaxation rate of the correlations: spectral gap of the second-moment
/// generator. At Gamma = 0 equals twice phi_of_gamma.
double theta_of_gamma(const NetworkSpec& spec);

struct EquilibriumState {
  Eigen::MatrixXcd c_eq;       // Hermitian, positive semidefinite
  Eigen::VectorXcd a_eq;       // identically zero
  double residual = 0.0;       // max-norm of B*flatten(c_eq) + G
  double min_eigenvalue = 0.0; // smallest eigenvalue of c_eq
};

/// Stationary correlations: solves B x = -G with a full-pivot dense LU and
/// returns the Hermitian-symmetrized unflattened matrix. Throws
/// SingularSystem when the generator has a (numerically) zero mode -- the
/// signature of an exact dark state -- reporting the near-zero eigenvalue.
EquilibriumState equilibrium(const NetworkSpec& spec);

enum class ModeClass { Dark, QuasiDark, Bright };

const char* to_string(ModeClass c);

struct ModeLeakage {
  double energy = 0.0;
  Eigen::VectorXcd vector;
  /// Total weight of the normalized eigenvector on dissipative nodes.
  double leakage = 0.0;
  ModeClass classification = ModeClass::Bright;
};

/// Classifies every hopping eigenstate by its weight on the dissipative
/// set: leakage < tol is dark, leakage < quasi_tol is quasi-dark. Returned
/// ascending in energy. Both thresholds are configurable; defaults are
/// 1e-8 (exact) and 1e-2 (quasi) of normalized weight.
std::vector<ModeLeakage> dark_state_analysis(const NetworkSpec& spec,
                                             double tol = 1e-8,
                                             double quasi_tol = 1e-2);

}  // namespace lindnet
