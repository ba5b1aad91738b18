#include "app/run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "app/csvio.hpp"
#include "lindnet/classical.hpp"
#include "lindnet/dynamics.hpp"
#include "lindnet/ensemble.hpp"
#include "lindnet/generators.hpp"
#include "lindnet/spectral.hpp"
#include "lindnet/sweep.hpp"

namespace lindnet::app {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

/// Tracks written files; anything not committed is unlinked on destruction.
class OutputGuard {
 public:
  explicit OutputGuard(fs::path dir) : dir_(std::move(dir)) {}
  ~OutputGuard() {
    if (committed_) return;
    for (const auto& p : files_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  fs::path add(const std::string& name) {
    files_.push_back(dir_ / name);
    return files_.back();
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& p : files_) out.push_back(p.filename().string());
    return out;
  }

  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
  bool committed_ = false;
};

void write_spectrum_csv(const fs::path& path, const GapResult& gap) {
  CsvWriter csv(path.string(), {"index", "re_eigenvalue", "im_eigenvalue"});
  for (std::size_t i = 0; i < gap.spectrum.size(); ++i)
    csv.row({std::to_string(i + 1), format_real(gap.spectrum[i].real()),
             format_real(gap.spectrum[i].imag())});
  csv.close();
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXcd& m,
                      const std::string& name) {
  CsvWriter csv(path.string(), {"n", "m", "re_" + name, "im_" + name});
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      csv.row({std::to_string(i + 1), std::to_string(j + 1),
               format_real(m(i, j).real()), format_real(m(i, j).imag())});
  csv.close();
}

json run_spectrum(const ExperimentConfig& cfg, OutputGuard& out) {
  json results;
  if (cfg.spectrum.target != "second") {
    const GapResult gap = spectral_gap(build_first_moment(cfg.network).matrix);
    write_spectrum_csv(out.add("spectrum_first.csv"), gap);
    results["phi"] = gap.gap;
    results["phi_non_relaxing"] = gap.non_relaxing;
  }
  if (cfg.spectrum.target != "first") {
    const GapResult gap = spectral_gap(build_second_moment(cfg.network).matrix);
    write_spectrum_csv(out.add("spectrum_second.csv"), gap);
    results["theta"] = gap.gap;
    results["theta_non_relaxing"] = gap.non_relaxing;
  }
  return results;
}

json run_equilibrium(const ExperimentConfig& cfg, OutputGuard& out) {
  const EquilibriumState eq = equilibrium(cfg.network);
  write_matrix_csv(out.add("c_eq.csv"), eq.c_eq, "c_eq");
  json results;
  results["residual"] = eq.residual;
  results["min_eigenvalue"] = eq.min_eigenvalue;
  return results;
}

json run_sweep_cmd(const ExperimentConfig& cfg, const RunOptions& opts,
                   OutputGuard& out) {
  SweepOptions sweep_opts;
  sweep_opts.threads = opts.threads;
  sweep_opts.with_equilibria = cfg.sweep.write_equilibria;
  const NetworkSpec& base = cfg.network;
  const SweepResult result = run_sweep(
      [&base](double gamma) { return with_dephasing(base, gamma); },
      cfg.sweep.grid.build(), cfg.sweep.refine, sweep_opts);

  CsvWriter csv(out.add("sweep.csv").string(), {"gamma", "phi", "theta"});
  for (std::size_t i = 0; i < result.gamma_grid.size(); ++i)
    csv.row({format_real(result.gamma_grid[i]), format_real(result.phi[i]),
             format_real(result.theta[i])});
  csv.close();

  if (result.equilibria) {
    for (std::size_t i = 0; i < result.equilibria->size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "c_eq_%03zu.csv", i);
      write_matrix_csv(out.add(name), (*result.equilibria)[i], "c_eq");
    }
  }

  json results;
  results["gamma_opt"] = result.gamma_opt;
  results["theta_max"] = result.theta_max;
  results["grid"] = result.gamma_grid;
  return results;
}

json run_classical(const ExperimentConfig& cfg, OutputGuard& out) {
  const ClassicalModel model = build_classical(cfg.network);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.rate_matrix,
                                                     Eigen::EigenvaluesOnly);
  CsvWriter spectrum(out.add("classical_spectrum.csv").string(),
                     {"index", "eigenvalue"});
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    spectrum.row({std::to_string(i + 1), format_real(eig.eigenvalues()(i))});
  spectrum.close();

  CsvWriter peq(out.add("classical_peq.csv").string(), {"n", "p_eq"});
  for (Eigen::Index i = 0; i < model.p_eq.size(); ++i)
    peq.row({std::to_string(i + 1), format_real(model.p_eq(i))});
  peq.close();

  json results;
  results["gap"] = model.gap;
  try {
    const IslandDecomposition decomposition = islands(cfg.network);
    json runs = json::array();
    for (const auto& run : decomposition.islands)
      runs.push_back({{"first", run.first}, {"last", run.last}});
    results["islands"] = runs;
    results["l_max"] = decomposition.l_max;
    results["lifshitz_asymptote"] =
        lifshitz_asymptote(cfg.network, cfg.network.dephasing);
  } catch (const ContractViolation&) {
    // Non-chain or island-free networks: the asymptote does not apply.
  }
  return results;
}

json run_evolve(const ExperimentConfig& cfg, OutputGuard& out) {
  const NetworkSpec& spec = cfg.network;
  const Eigen::Index n = spec.n_sites();

  // Default initial condition: excite the slowest sector deliberately with
  // the most-dark hopping eigenvector.
  const auto modes = dark_state_analysis(spec);
  std::size_t darkest = 0;
  for (std::size_t i = 1; i < modes.size(); ++i)
    if (modes[i].leakage < modes[darkest].leakage) darkest = i;
  const Eigen::VectorXcd xi = modes[darkest].vector;

  const bool want_corr = cfg.evolve.observable != "mean";
  std::optional<EquilibriumState> eq;
  if (want_corr) eq = equilibrium(spec);

  Eigen::MatrixXcd c0 = xi * xi.adjoint();
  if (eq) c0 += eq->c_eq;

  const double dt_max = cfg.evolve.dt_max > 0.0
                            ? cfg.evolve.dt_max
                            : 0.1 / spectral_radius_bound(spec);
  IntegrateOptions int_opts;
  int_opts.max_samples = cfg.evolve.max_samples;
  const Trajectory traj =
      integrate(spec, xi, c0, cfg.evolve.t_end, dt_max, int_opts);

  {
    std::vector<std::string> header = {"time", "mean_norm"};
    if (eq) header.push_back("corr_distance");
    CsvWriter csv(out.add("observables.csv").string(), header);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      std::vector<std::string> row = {format_real(traj.times[i]),
                                      format_real(traj.a_values[i].norm())};
      if (eq)
        row.push_back(format_real((traj.c_values[i] - eq->c_eq).norm()));
      csv.row(row);
    }
    csv.close();
  }

  if (cfg.evolve.write_trajectory) {
    std::vector<std::string> header = {"time"};
    for (Eigen::Index i = 0; i < n; ++i) {
      header.push_back("re_a_" + std::to_string(i + 1));
      header.push_back("im_a_" + std::to_string(i + 1));
    }
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const std::string suffix =
            std::to_string(i + 1) + "_" + std::to_string(j + 1);
        header.push_back("re_c_" + suffix);
        header.push_back("im_c_" + suffix);
      }
    CsvWriter csv(out.add("trajectory.csv").string(), header);
    std::vector<std::string> row;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
      row.clear();
      row.push_back(format_real(traj.times[s]));
      for (Eigen::Index i = 0; i < n; ++i) {
        row.push_back(format_real(traj.a_values[s](i).real()));
        row.push_back(format_real(traj.a_values[s](i).imag()));
      }
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          row.push_back(format_real(traj.c_values[s](i, j).real()));
          row.push_back(format_real(traj.c_values[s](i, j).imag()));
        }
      csv.row(row);
    }
    csv.close();
  }

  json results;
  results["t_end"] = cfg.evolve.t_end;
  results["dt_max"] = dt_max;
  results["samples"] = traj.times.size();
  results["initial_mode_energy"] = modes[darkest].energy;
  results["initial_mode_leakage"] = modes[darkest].leakage;
  // Rate fits are best-effort: a window that violates the fit preconditions
  // is recorded, not fatal.
  if (cfg.evolve.observable != "correlation") {
    try {
      results["mean_norm_rate"] = fit_decay_rate(traj, Observable::MeanNorm);
    } catch (const Error& err) {
      results["mean_norm_rate_error"] = err.what();
    }
  }
  if (eq) {
    try {
      results["corr_distance_rate"] =
          fit_decay_rate(traj, Observable::CorrelationDistance, &eq->c_eq);
    } catch (const Error& err) {
      results["corr_distance_rate_error"] = err.what();
    }
  }
  return results;
}

json run_darkstates(const ExperimentConfig& cfg, OutputGuard& out) {
  const auto modes = dark_state_analysis(cfg.network, cfg.darkstates.tol,
                                         cfg.darkstates.quasi_tol);
  CsvWriter csv(out.add("darkstates.csv").string(),
                {"mode", "energy", "leakage", "classification"});
  int dark = 0, quasi = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    csv.row({std::to_string(i + 1), format_real(modes[i].energy),
             format_real(modes[i].leakage),
             to_string(modes[i].classification)});
    if (modes[i].classification == ModeClass::Dark) ++dark;
    if (modes[i].classification == ModeClass::QuasiDark) ++quasi;
  }
  csv.close();

  json results;
  results["tol"] = cfg.darkstates.tol;
  results["quasi_tol"] = cfg.darkstates.quasi_tol;
  results["dark_modes"] = dark;
  results["quasi_dark_modes"] = quasi;
  return results;
}

json run_ensemble(const ExperimentConfig& cfg, const RunOptions& opts,
                  OutputGuard& out) {
  BernoulliEnsembleConfig ensemble;
  ensemble.base_chain = cfg.chain;
  ensemble.base_chain.dephasing = 0.0;
  ensemble.p = cfg.ensemble.p;
  ensemble.gamma = cfg.ensemble.gamma;
  ensemble.beta_ratio = cfg.ensemble.beta_ratio;
  ensemble.n_realizations = cfg.ensemble.n_realizations;
  ensemble.seed = cfg.ensemble.seed;

  EnsembleOptions ens_opts;
  ens_opts.threads = opts.threads;
  const AveragedCurves curves =
      average_curves(ensemble, cfg.ensemble.grid.build(), ens_opts);

  CsvWriter csv(out.add("ensemble.csv").string(),
                {"gamma", "phi_mean", "phi_stderr", "theta_mean",
                 "theta_stderr", "n_realizations"});
  for (std::size_t i = 0; i < curves.gamma_grid.size(); ++i)
    csv.row({format_real(curves.gamma_grid[i]),
             format_real(curves.phi_mean[i]),
             format_real(curves.phi_stderr[i]),
             format_real(curves.theta_mean[i]),
             format_real(curves.theta_stderr[i]),
             std::to_string(curves.realization_count)});
  csv.close();

  json results;
  results["seed"] = cfg.ensemble.seed;
  results["realizations"] = curves.realization_count;
  results["zero_trap_realizations"] = curves.zero_trap_realizations;
  return results;
}

}  // namespace

int run(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (opts.print_config) std::cout << cfg.normalized() << std::flush;

  const auto t_start = std::chrono::steady_clock::now();
  const fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + dir.string() +
                  "': " + ec.message());

  OutputGuard out(dir);
  json results;
  switch (cfg.command) {
    case Command::Spectrum: results = run_spectrum(cfg, out); break;
    case Command::Equilibrium: results = run_equilibrium(cfg, out); break;
    case Command::Sweep: results = run_sweep_cmd(cfg, opts, out); break;
    case Command::Classical: results = run_classical(cfg, out); break;
    case Command::Evolve: results = run_evolve(cfg, out); break;
    case Command::DarkStates: results = run_darkstates(cfg, out); break;
    case Command::Ensemble: results = run_ensemble(cfg, opts, out); break;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  json manifest;
  manifest["tool"] = {{"name", "lindnet"}, {"version", kVersion}};
  manifest["command"] = to_string(cfg.command);
  manifest["config"] = {{"path", cfg.config_path},
                        {"fnv1a64", hex64(cfg.config_hash)}};
  if (!cfg.matrix_file.empty()) {
    manifest["config"]["matrix_file"] = cfg.matrix_file;
    manifest["config"]["matrix_fnv1a64"] = hex64(cfg.matrix_hash);
  }
  manifest["network"] = {
      {"sites", cfg.network.n_sites()},
      {"chain", cfg.network_is_chain},
      {"dephasing", cfg.network.dephasing},
      {"statistics", lindnet::to_string(cfg.network.statistics)},
      {"reference_rate", cfg.network.reference_rate},
      {"dissipative_sites", dissipative_sites(cfg.network)},
  };
  manifest["normalized_config"] = cfg.normalized();
  manifest["threads"] = opts.threads;
  manifest["results"] = results;
  manifest["outputs"] = out.names();
  manifest["wall_time_seconds"] = wall;

  const fs::path manifest_path = out.add("manifest.json");
  {
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw IoError("cannot open '" + manifest_path.string() + "'");
    mf << manifest.dump(2) << '\n';
    if (!mf) throw IoError("write failed: " + manifest_path.string());
  }
  out.commit();
  return 0;
}

}  // namespace lindnet::app
