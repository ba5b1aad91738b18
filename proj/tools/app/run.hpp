#pragma once

#include <string>

#include "app/config.hpp"

namespace lindnet::app {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  bool print_config = false;
};

/// Executes the configured command: writes its CSV outputs and a
/// manifest.json (inputs hash, seed, resolved parameters, wall time) into
/// out_dir. Partial outputs are removed if anything fails. Returns 0.
int run(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace lindnet::app
