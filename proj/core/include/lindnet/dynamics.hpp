#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lindnet/network.hpp"

namespace lindnet {

/// Sampled trajectory of the moment ODEs. Stored states are Hermitian to
/// 1e-9 and finite; violations abort the integration with a time stamp.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> a_values;
  std::vector<Eigen::MatrixXcd> c_values;
};

struct IntegrateOptions {
  /// Upper bound on stored samples (first and last step always included).
  int max_samples = 2048;
};

/// Crude spectral-radius bound used by the step-size contract:
/// max(Gamma, max gamma_n, max row sum of |J|).
double spectral_radius_bound(const NetworkSpec& spec);

/// Fixed-step classical 4th-order Runge-Kutta integration of
/// da/dt = M a, dC/dt = B C + G from (a0, c0) to t_end.
///
/// Step-size contract: dt_max <= 0.1 / spectral_radius_bound(spec); the
/// actual step divides t_end evenly and never exceeds dt_max. c0 must be
/// Hermitian positive semidefinite.
Trajectory integrate(const NetworkSpec& spec, const Eigen::VectorXcd& a0,
                     const Eigen::MatrixXcd& c0, double t_end, double dt_max,
                     const IntegrateOptions& opts = {});

enum class Observable { MeanNorm, CorrelationDistance };

struct FitOptions {
  /// Fraction of the decay window (from its end) used for the fit; the
  /// discarded head skips transients from non-normal mode mixing.
  double window_fraction = 1.0 / 3.0;
  /// Relative floor ending the decay window.
  double floor_rel = 1e-12;
};

/// Least-squares slope of log(observable) over the final part of the decay
/// window. MeanNorm is |a(t)|_2; CorrelationDistance is the Frobenius
/// distance |C(t) - c_eq|_F and requires c_eq. The trajectory must span at
/// least 3 decades of decay (or hit the 1e-12 floor); a non-decaying
/// observable is an error, not a zero rate.
double fit_decay_rate(const Trajectory& traj, Observable observable,
                      const Eigen::MatrixXcd* c_eq = nullptr,
                      const FitOptions& opts = {});

}  // namespace lindnet
