#include "lindnet/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lindnet/errors.hpp"
#include "lindnet/generators.hpp"

namespace lindnet {

double spectral_radius_bound(const NetworkSpec& spec) {
  const double row_sum = spec.hopping.cwiseAbs().rowwise().sum().maxCoeff();
  const double max_loss = spec.loss.size() ? spec.loss.maxCoeff() : 0.0;
  return std::max({spec.dephasing, max_loss, row_sum});
}

Trajectory integrate(const NetworkSpec& spec, const Eigen::VectorXcd& a0,
                     const Eigen::MatrixXcd& c0, double t_end, double dt_max,
                     const IntegrateOptions& opts) {
  require_valid(spec);
  const Eigen::Index n = spec.n_sites();
  if (a0.size() != n)
    throw ContractViolation("integrate: a0 length does not match site count");
  if (c0.rows() != n || c0.cols() != n)
    throw ContractViolation("integrate: c0 shape does not match site count");
  if (!(t_end > 0.0))
    throw ContractViolation("integrate: t_end must be positive");

  const double c_scale = std::max(1.0, c0.cwiseAbs().maxCoeff());
  if ((c0 - c0.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * c_scale)
    throw ContractViolation("integrate: c0 is not Hermitian");
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(c0,
                                                        Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-8)
      throw ContractViolation("integrate: c0 is not positive semidefinite");
  }

  const double rho = spectral_radius_bound(spec);
  const double dt_limit = 0.1 / rho;
  if (!(dt_max > 0.0) || (rho > 0.0 && dt_max > dt_limit * (1.0 + 1e-9))) {
    std::ostringstream os;
    os << "integrate: step-size contract violated: dt_max = " << dt_max
       << " exceeds 0.1 / rho_max = " << dt_limit
       << " (rho_max = max(Gamma, max gamma_n, max |J| row sum) = " << rho
       << ")";
    throw ContractViolation(os.str());
  }

  const auto first = build_first_moment(spec);
  SecondMomentOptions mf;
  mf.materialize_dense = false;  // the integrator only needs the action
  const auto second = build_second_moment(spec, mf);

  const long n_steps =
      std::max<long>(1, static_cast<long>(std::ceil(t_end / dt_max - 1e-12)));
  const double dt = t_end / static_cast<double>(n_steps);
  const int max_samples = std::max(2, opts.max_samples);
  const long stride =
      std::max<long>(1, (n_steps + max_samples - 2) / (max_samples - 1));

  Trajectory traj;
  traj.times.reserve(max_samples + 1);
  traj.a_values.reserve(max_samples + 1);
  traj.c_values.reserve(max_samples + 1);

  Eigen::VectorXcd a = a0;
  Eigen::MatrixXcd c = c0;

  auto record = [&](double t) {
    if (!a.allFinite() || !c.allFinite()) {
      std::ostringstream os;
      os << "integrate: non-finite state at t = " << t << "; aborting";
      throw NumericalError(os.str());
    }
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
      std::ostringstream os;
      os << "integrate: correlations lost Hermiticity at t = " << t;
      throw NumericalError(os.str());
    }
    traj.times.push_back(t);
    traj.a_values.push_back(a);
    traj.c_values.push_back(c);
  };

  record(0.0);

  Eigen::VectorXcd ka1(n), ka2(n), ka3(n), ka4(n);
  Eigen::MatrixXcd kc1(n, n), kc2(n, n), kc3(n, n), kc4(n, n);
  for (long step = 0; step < n_steps; ++step) {
    ka1 = first.matrix * a;
    kc1 = apply_second_moment(second, c);
    ka2 = first.matrix * (a + 0.5 * dt * ka1);
    kc2 = apply_second_moment(second, c + 0.5 * dt * kc1);
    ka3 = first.matrix * (a + 0.5 * dt * ka2);
    kc3 = apply_second_moment(second, c + 0.5 * dt * kc2);
    ka4 = first.matrix * (a + dt * ka3);
    kc4 = apply_second_moment(second, c + dt * kc3);
    a += (dt / 6.0) * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
    c += (dt / 6.0) * (kc1 + 2.0 * kc2 + 2.0 * kc3 + kc4);

    const long done = step + 1;
    if (done == n_steps || done % stride == 0)
      record(static_cast<double>(done) * dt);
  }
  return traj;
}

double fit_decay_rate(const Trajectory& traj, Observable observable,
                      const Eigen::MatrixXcd* c_eq, const FitOptions& opts) {
  const std::size_t n = traj.times.size();
  if (n < 4)
    throw ContractViolation("fit_decay_rate: trajectory has too few samples");
  if (observable == Observable::CorrelationDistance && c_eq == nullptr)
    throw ContractViolation(
        "fit_decay_rate: CorrelationDistance requires the equilibrium matrix");

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    ys[i] = observable == Observable::MeanNorm
                ? traj.a_values[i].norm()
                : (traj.c_values[i] - *c_eq).norm();
  }

  double y_max = 0.0;
  for (double y : ys) y_max = std::max(y_max, y);
  if (!(y_max > 0.0))
    throw NumericalError("fit_decay_rate: observable is identically zero");

  // The decay window ends where the observable reaches the relative floor.
  const double floor = y_max * opts.floor_rel;
  std::size_t end = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (ys[i] <= floor) {
      end = i;
      break;
    }
  }

  const double drop = ys[end] > 0.0 ? y_max / ys[end]
                                    : std::numeric_limits<double>::infinity();
  if (drop < 1e3 && ys[end] > 1e-12) {
    std::ostringstream os;
    os << "fit_decay_rate: insufficient dynamic range (observable dropped by "
       << drop << "x, need 1e3 or the 1e-12 floor)";
    throw ContractViolation(os.str());
  }

  const double t0 = traj.times[0], t1 = traj.times[end];
  const double cut = t1 - (t1 - t0) * opts.window_fraction;

  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  long count = 0;
  for (std::size_t i = 0; i <= end; ++i) {
    if (traj.times[i] < cut || ys[i] <= 0.0) continue;
    const double t = traj.times[i], y = std::log(ys[i]);
    sum_t += t;
    sum_y += y;
    sum_tt += t * t;
    sum_ty += t * y;
    ++count;
  }
  if (count < 3)
    throw ContractViolation(
        "fit_decay_rate: fewer than 3 usable samples in the fit window");

  const double denom = count * sum_tt - sum_t * sum_t;
  if (denom <= 0.0)
    throw NumericalError("fit_decay_rate: degenerate fit window");
  const double slope = (count * sum_ty - sum_t * sum_y) / denom;
  if (slope >= 0.0) {
    std::ostringstream os;
    os << "fit_decay_rate: observable is non-decaying (slope " << slope << ")";
    throw NumericalError(os.str());
  }
  return -slope;
}

}  // namespace lindnet
