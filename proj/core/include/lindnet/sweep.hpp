#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lindnet/network.hpp"

namespace lindnet {

struct SweepResult {
  std::vector<double> gamma_grid;   // strictly increasing
  std::vector<double> phi;
  std::vector<double> theta;
  double gamma_opt = 0.0;           // a grid point; argmax of theta
  double theta_max = 0.0;
  std::optional<std::vector<Eigen::MatrixXcd>> equilibria;
};

struct SweepOptions {
  int threads = 1;
  bool with_equilibria = false;
  /// Golden-section bracket width terminating the refinement, in the same
  /// rate units as the grid.
  double refine_tol = 1e-3;
};

/// Evaluates phi and theta at every grid point of spec_at(gamma). With
/// refine = true, the argmax of theta is refined by golden-section search
/// between the neighbors of the coarse argmax (local unimodality assumed
/// there only); the refined point is appended to the grid and reported as
/// gamma_opt. Plateau tie-break: smallest gamma. Grid points evaluate in
/// parallel; assembly order is deterministic.
SweepResult run_sweep(const std::function<NetworkSpec(double)>& spec_at,
                      std::vector<double> grid, bool refine,
                      const SweepOptions& opts = {});

/// 60 logarithmically spaced points over [1e-2, 1e3] (reference-rate
/// units), prepended with gamma = 0.
std::vector<double> default_gamma_grid();

}  // namespace lindnet
