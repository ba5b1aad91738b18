#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "app/config.hpp"
#include "app/run.hpp"
#include "lindnet/errors.hpp"

namespace {

int default_threads() {
  if (const char* env = std::getenv("LINDNET_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  using lindnet::app::Command;

  CLI::App app{
      "lindnet -- relaxation analysis of dissipative bosonic/fermionic "
      "networks under dephasing"};
  app.require_subcommand(1);

  struct Invocation {
    Command command;
    std::string config;
    lindnet::app::RunOptions options;
  };
  Invocation inv;
  inv.options.threads = default_threads();

  const std::pair<const char*, Command> commands[] = {
      {"spectrum", Command::Spectrum},
      {"equilibrium", Command::Equilibrium},
      {"sweep", Command::Sweep},
      {"classical", Command::Classical},
      {"evolve", Command::Evolve},
      {"darkstates", Command::DarkStates},
      {"ensemble", Command::Ensemble},
  };
  const char* descriptions[] = {
      "write the first/second moment generator spectra and gaps",
      "write the stationary correlation matrix",
      "sweep the dephasing rate, locate the optimal value",
      "write the classical (strong-dephasing) rate-matrix spectrum",
      "integrate the moment equations and fit decay rates",
      "classify hopping eigenstates by dissipative leakage",
      "average relaxation rates over Bernoulli trap ensembles",
  };
  int index = 0;
  for (const auto& [name, command] : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions[index++]);
    sub->add_option("--config", inv.config, "experiment config file")
        ->required();
    sub->add_option("--out", inv.options.out_dir, "output directory")
        ->capture_default_str();
    sub->add_option("--threads", inv.options.threads,
                    "worker threads (fallback: LINDNET_THREADS)")
        ->capture_default_str();
    sub->add_flag("--print-config", inv.options.print_config,
                  "echo the normalized configuration to stdout");
    sub->callback([&inv, command] { inv.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const auto cfg = lindnet::app::parse_config(inv.config, inv.command);
    return lindnet::app::run(cfg, inv.options);
  } catch (const lindnet::app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const lindnet::InvalidSpec& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const lindnet::app::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const lindnet::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
