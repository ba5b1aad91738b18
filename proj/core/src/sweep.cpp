#include "lindnet/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "lindnet/errors.hpp"
#include "lindnet/spectral.hpp"
#include "parallel.hpp"

namespace lindnet {

namespace {

struct PointResult {
  double phi = 0.0;
  double theta = 0.0;
  std::optional<Eigen::MatrixXcd> c_eq;
};

PointResult evaluate_point(const std::function<NetworkSpec(double)>& spec_at,
                           double gamma, bool with_equilibria) {
  const NetworkSpec spec = spec_at(gamma);
  PointResult result;
  result.phi = phi_of_gamma(spec);
  result.theta = theta_of_gamma(spec);
  if (with_equilibria) result.c_eq = equilibrium(spec).c_eq;
  return result;
}

}  // namespace

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  grid.push_back(0.0);
  const int points = 60;
  const double lo = std::log10(1e-2), hi = std::log10(1e3);
  for (int k = 0; k < points; ++k)
    grid.push_back(std::pow(10.0, lo + (hi - lo) * k / (points - 1)));
  return grid;
}

SweepResult run_sweep(const std::function<NetworkSpec(double)>& spec_at,
                      std::vector<double> grid, bool refine,
                      const SweepOptions& opts) {
  if (grid.empty()) throw ContractViolation("sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || (i > 0 && grid[i] <= grid[i - 1]))
      throw ContractViolation(
          "sweep grid must be strictly increasing and nonnegative");
  }

  std::vector<PointResult> points(grid.size());
  detail::parallel_for_index(
      static_cast<int>(grid.size()), opts.threads,
      [&](int i) { points[i] = evaluate_point(spec_at, grid[i],
                                              opts.with_equilibria); });

  SweepResult result;
  result.gamma_grid = grid;
  result.phi.reserve(grid.size());
  result.theta.reserve(grid.size());
  if (opts.with_equilibria) result.equilibria.emplace();
  for (auto& p : points) {
    result.phi.push_back(p.phi);
    result.theta.push_back(p.theta);
    if (opts.with_equilibria) result.equilibria->push_back(std::move(*p.c_eq));
  }

  // Coarse argmax; plateaus resolve to the smallest gamma.
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.theta.size(); ++i)
    if (result.theta[i] > result.theta[best]) best = i;

  const double theta_span =
      *std::max_element(result.theta.begin(), result.theta.end()) -
      *std::min_element(result.theta.begin(), result.theta.end());
  const bool plateau =
      theta_span <= 1e-12 * std::max(1.0, std::abs(result.theta[best]));
  if (plateau) {
    result.gamma_opt = result.gamma_grid.front();
    result.theta_max = result.theta.front();
    return result;
  }

  result.gamma_opt = result.gamma_grid[best];
  result.theta_max = result.theta[best];
  if (!refine || grid.size() < 2) return result;

  const double lo_edge = grid[best > 0 ? best - 1 : best];
  const double hi_edge = grid[std::min(best + 1, grid.size() - 1)];
  if (!(hi_edge > lo_edge)) return result;

  auto theta_at = [&](double gamma) {
    return evaluate_point(spec_at, gamma, false).theta;
  };

  // Golden-section ascent inside the coarse bracket.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = lo_edge, hi = hi_edge;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = theta_at(x1);
  double f2 = theta_at(x2);
  while (hi - lo > opts.refine_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = theta_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = theta_at(x1);
    }
  }

  const double gamma_ref = (lo + hi) / 2.0;
  PointResult refined = evaluate_point(spec_at, gamma_ref, opts.with_equilibria);
  if (refined.theta < result.theta_max) return result;  // keep the coarse point

  const auto pos = std::lower_bound(result.gamma_grid.begin(),
                                    result.gamma_grid.end(), gamma_ref);
  const auto idx = pos - result.gamma_grid.begin();
  if (pos == result.gamma_grid.end() || *pos != gamma_ref) {
    result.gamma_grid.insert(pos, gamma_ref);
    result.phi.insert(result.phi.begin() + idx, refined.phi);
    result.theta.insert(result.theta.begin() + idx, refined.theta);
    if (opts.with_equilibria)
      result.equilibria->insert(result.equilibria->begin() + idx,
                                std::move(*refined.c_eq));
  }
  result.gamma_opt = gamma_ref;
  result.theta_max = refined.theta;
  return result;
}

}  // namespace lindnet
