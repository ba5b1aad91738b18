#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lindnet/ensemble.hpp"
#include "lindnet/errors.hpp"
#include "lindnet/network.hpp"

namespace lindnet::app {

/// Config file problem: syntax error, schema violation, unresolvable path or
/// network validation failure. Messages carry file:line where applicable.
struct ConfigError : Error {
  using Error::Error;
};

/// Output-writing failure.
struct IoError : Error {
  using Error::Error;
};

enum class Command {
  Spectrum,
  Equilibrium,
  Sweep,
  Classical,
  Evolve,
  DarkStates,
  Ensemble,
};

const char* to_string(Command c);

/// Gamma grid description shared by the sweep and ensemble sections.
struct GridParams {
  std::string kind = "log";          // log | linear | explicit
  double min = 1e-2;
  double max = 1e3;
  int points = 60;
  bool include_zero = true;
  std::vector<double> values;        // for kind = explicit

  std::vector<double> build() const;
};

struct SpectrumParams {
  std::string target = "both";       // first | second | both
};

struct SweepParams {
  GridParams grid;
  bool refine = false;
  bool write_equilibria = false;
};

struct EvolveParams {
  double t_end = 0.0;                // required
  double dt_max = 0.0;               // 0 = auto (the step-size contract bound)
  std::string observable = "both";   // mean | correlation | both
  bool write_trajectory = false;
  int max_samples = 2048;
};

struct DarkStatesParams {
  double tol = 1e-8;
  double quasi_tol = 1e-2;
};

struct EnsembleParams {
  double p = 0.0;                    // required, in (0,1)
  double gamma = 0.0;                // required
  double beta_ratio = 0.0;           // required, g/gamma
  int n_realizations = 100;
  std::uint64_t seed = 0;
  GridParams grid;
};

/// One fully validated experiment: the network, the invoked command and its
/// resolved parameters. Produced by parse_config; immutable afterwards.
struct ExperimentConfig {
  Command command = Command::Spectrum;

  NetworkSpec network;               // validated and symmetrized
  bool network_is_chain = false;
  ChainBuilder chain;                // populated when network_is_chain
  std::string matrix_file;           // populated otherwise

  SpectrumParams spectrum;
  SweepParams sweep;
  EvolveParams evolve;
  DarkStatesParams darkstates;
  EnsembleParams ensemble;

  std::string config_path;
  std::uint64_t config_hash = 0;     // FNV-1a of the config file bytes
  std::uint64_t matrix_hash = 0;     // FNV-1a of the matrix file, if any

  /// Normalized echo of the configuration with every default resolved.
  std::string normalized() const;
};

/// Parses and validates the structured-text config at `path` for the given
/// command. Sections: [network] plus optional per-command sections; every
/// section present is validated whether or not it is invoked. Throws
/// ConfigError with a line number on syntax errors and with the field name
/// on schema violations.
ExperimentConfig parse_config(const std::string& path, Command command);

std::uint64_t fnv1a64(const void* data, std::size_t size);

}  // namespace lindnet::app
