#include "app/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "app/csvio.hpp"

namespace lindnet::app {

namespace fs = std::filesystem;

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::map<std::string, Entry> entries;
  int line = 0;
  bool present = false;
};

using SectionMap = std::map<std::string, Section>;

const std::vector<std::string> kSections = {
    "network", "spectrum",   "equilibrium", "sweep",
    "classical", "evolve",   "darkstates",  "ensemble"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& msg) {
  std::ostringstream os;
  os << path << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

SectionMap parse_ini(const std::string& path, const std::string& text) {
  SectionMap sections;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(path, line_no, "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), current) ==
          kSections.end())
        fail(path, line_no, "unknown section '" + current + "'");
      if (sections[current].present)
        fail(path, line_no, "duplicate section '" + current + "'");
      sections[current].present = true;
      sections[current].line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(path, line_no, "expected 'key = value' or '[section]'");
    if (current.empty())
      fail(path, line_no, "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(path, line_no, "empty key");
    auto& section = sections[current];
    if (section.entries.count(key))
      fail(path, line_no, "duplicate key '" + key + "' in [" + current + "]");
    section.entries[key] = Entry{value, line_no, false};
  }
  return sections;
}

double parse_double(const std::string& path, const Entry& e,
                    const std::string& field) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(v))
    fail(path, e.line, "field '" + field + "': not a finite number: '" +
                           e.value + "'");
  return v;
}

long long parse_int(const std::string& path, const Entry& e,
                    const std::string& field) {
  long long v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc{} || r.ptr != end)
    fail(path, e.line, "field '" + field + "': not an integer: '" + e.value +
                           "'");
  return v;
}

std::uint64_t parse_uint64(const std::string& path, const Entry& e,
                           const std::string& field) {
  std::uint64_t v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc{} || r.ptr != end)
    fail(path, e.line,
         "field '" + field + "': not an unsigned integer: '" + e.value + "'");
  return v;
}

bool parse_bool(const std::string& path, const Entry& e,
                const std::string& field) {
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(path, e.line, "field '" + field + "': expected a boolean, got '" +
                         e.value + "'");
}

/// Accessor that tracks which keys were consumed so leftovers can be
/// reported as schema violations.
class SectionReader {
 public:
  SectionReader(const std::string& path, const std::string& name,
                Section& section)
      : path_(path), name_(name), section_(section) {}

  Entry* find(const std::string& key) {
    auto it = section_.entries.find(key);
    if (it == section_.entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  Entry& require(const std::string& key) {
    Entry* e = find(key);
    if (!e)
      fail(path_, section_.line,
           "[" + name_ + "] is missing required field '" + key + "'");
    return *e;
  }

  void finish() {
    for (const auto& [key, entry] : section_.entries)
      if (!entry.used)
        fail(path_, entry.line,
             "unknown field '" + key + "' in [" + name_ + "]");
  }

  const std::string& path() const { return path_; }

 private:
  const std::string& path_;
  std::string name_;
  Section& section_;
};

std::vector<ChainBuilder::NodeRates> parse_dissipative(
    const std::string& path, const Entry& e) {
  // Triples node:gamma:gain separated by commas and/or whitespace.
  std::vector<ChainBuilder::NodeRates> nodes;
  std::string tokens = e.value;
  std::replace(tokens.begin(), tokens.end(), ',', ' ');
  std::istringstream in(tokens);
  std::string tok;
  while (in >> tok) {
    const auto c1 = tok.find(':');
    const auto c2 = tok.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      fail(path, e.line,
           "field 'dissipative': expected node:gamma:gain, got '" + tok + "'");
    const Entry node_e{tok.substr(0, c1), e.line};
    const Entry loss_e{tok.substr(c1 + 1, c2 - c1 - 1), e.line};
    const Entry gain_e{tok.substr(c2 + 1), e.line};
    ChainBuilder::NodeRates rates;
    rates.node = static_cast<int>(parse_int(path, node_e, "dissipative.node"));
    rates.loss = parse_double(path, loss_e, "dissipative.gamma");
    rates.gain = parse_double(path, gain_e, "dissipative.gain");
    nodes.push_back(rates);
  }
  if (nodes.empty())
    fail(path, e.line, "field 'dissipative': empty node list");
  return nodes;
}

Eigen::MatrixXcd read_matrix_file(const std::string& cfg_path,
                                  const fs::path& file, int decl_line,
                                  std::uint64_t* hash) {
  std::ifstream in(file, std::ios::binary);
  if (!in)
    fail(cfg_path, decl_line,
         "matrix_file '" + file.string() + "' is not readable");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  *hash = fnv1a64(bytes.data(), bytes.size());

  std::istringstream tokens(bytes);
  long long n = 0;
  if (!(tokens >> n) || n < 1)
    throw ConfigError(file.string() +
                      ": first token must declare a positive site count");
  Eigen::MatrixXcd m(n, n);
  std::string tok;
  for (long long i = 0; i < n * n; ++i) {
    if (!(tokens >> tok))
      throw ConfigError(file.string() + ": expected " + std::to_string(n * n) +
                        " entries, found " + std::to_string(i));
    const auto comma = tok.find(',');
    if (comma == std::string::npos)
      throw ConfigError(file.string() + ": entry " + std::to_string(i + 1) +
                        " is not of the form re,im: '" + tok + "'");
    const Entry re{tok.substr(0, comma), decl_line};
    const Entry im{tok.substr(comma + 1), decl_line};
    m(i / n, i % n) = std::complex<double>(
        parse_double(file.string(), re, "matrix entry"),
        parse_double(file.string(), im, "matrix entry"));
  }
  if (tokens >> tok)
    throw ConfigError(file.string() + ": trailing data after " +
                      std::to_string(n * n) + " entries");
  return m;
}

GridParams parse_grid(SectionReader& r) {
  GridParams grid;
  if (Entry* e = r.find("grid")) {
    grid.kind = e->value;
    if (grid.kind != "log" && grid.kind != "linear" && grid.kind != "explicit")
      fail(r.path(), e->line,
           "field 'grid': expected log, linear or explicit");
  }
  if (Entry* e = r.find("grid_min")) grid.min = parse_double(r.path(), *e, "grid_min");
  if (Entry* e = r.find("grid_max")) grid.max = parse_double(r.path(), *e, "grid_max");
  if (Entry* e = r.find("grid_points")) {
    grid.points = static_cast<int>(parse_int(r.path(), *e, "grid_points"));
    if (grid.points < 2) fail(r.path(), e->line, "field 'grid_points': need at least 2");
  }
  if (Entry* e = r.find("include_zero"))
    grid.include_zero = parse_bool(r.path(), *e, "include_zero");
  if (Entry* e = r.find("grid_values")) {
    std::string tokens = e->value;
    std::replace(tokens.begin(), tokens.end(), ',', ' ');
    std::istringstream in(tokens);
    std::string tok;
    while (in >> tok)
      grid.values.push_back(parse_double(r.path(), Entry{tok, e->line}, "grid_values"));
    if (grid.values.empty())
      fail(r.path(), e->line, "field 'grid_values': empty list");
  }
  if (grid.kind == "explicit" && grid.values.empty())
    fail(r.path(), 0, "grid = explicit requires grid_values");

  // Validate eagerly so schema problems surface at parse time.
  if (grid.kind != "explicit") {
    if (!(grid.min > 0.0) && grid.kind == "log")
      throw ConfigError(r.path() + ": field 'grid_min': must be positive for log grids");
    if (!(grid.min >= 0.0))
      throw ConfigError(r.path() + ": field 'grid_min': must be nonnegative");
    if (!(grid.max > grid.min))
      throw ConfigError(r.path() + ": field 'grid_max': must exceed grid_min");
  } else {
    for (std::size_t i = 0; i < grid.values.size(); ++i)
      if (grid.values[i] < 0.0 ||
          (i > 0 && grid.values[i] <= grid.values[i - 1]))
        throw ConfigError(
            r.path() +
            ": field 'grid_values': must be strictly increasing and nonnegative");
  }
  return grid;
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Equilibrium: return "equilibrium";
    case Command::Sweep: return "sweep";
    case Command::Classical: return "classical";
    case Command::Evolve: return "evolve";
    case Command::DarkStates: return "darkstates";
    case Command::Ensemble: return "ensemble";
  }
  return "?";
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<double> GridParams::build() const {
  std::vector<double> grid;
  if (kind == "explicit") {
    grid = values;
  } else if (kind == "log") {
    const double lo = std::log10(min), hi = std::log10(max);
    for (int k = 0; k < points; ++k)
      grid.push_back(std::pow(10.0, lo + (hi - lo) * k / (points - 1)));
  } else {
    for (int k = 0; k < points; ++k)
      grid.push_back(min + (max - min) * k / (points - 1));
  }
  if (include_zero && !grid.empty() && grid.front() > 0.0)
    grid.insert(grid.begin(), 0.0);
  return grid;
}

ExperimentConfig parse_config(const std::string& path, Command command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  ExperimentConfig cfg;
  cfg.command = command;
  cfg.config_path = path;
  cfg.config_hash = fnv1a64(text.data(), text.size());

  SectionMap sections = parse_ini(path, text);
  if (!sections["network"].present)
    throw ConfigError(path + ": missing required [network] section");

  {  // --- [network]
    SectionReader r(path, "network", sections["network"]);
    Entry* n_sites = r.find("n_sites");
    Entry* matrix_file = r.find("matrix_file");
    if ((n_sites == nullptr) == (matrix_file == nullptr))
      throw ConfigError(path +
                        ": [network] needs exactly one of n_sites (chain) or "
                        "matrix_file");

    double dephasing = 0.0;  // documented default when the key is omitted
    if (Entry* e = r.find("dephasing")) {
      dephasing = parse_double(path, *e, "dephasing");
      if (dephasing < 0.0)
        fail(path, e->line, "field 'dephasing': must be nonnegative");
    }
    Statistics statistics = Statistics::Bosonic;
    if (Entry* e = r.find("statistics")) {
      if (e->value == "bosonic") statistics = Statistics::Bosonic;
      else if (e->value == "fermionic") statistics = Statistics::Fermionic;
      else fail(path, e->line,
                "field 'statistics': expected bosonic or fermionic");
    }
    std::vector<ChainBuilder::NodeRates> dissipative;
    if (Entry* e = r.find("dissipative"))
      dissipative = parse_dissipative(path, *e);

    if (n_sites) {
      cfg.network_is_chain = true;
      cfg.chain.n_sites = static_cast<int>(parse_int(path, *n_sites, "n_sites"));
      if (Entry* e = r.find("hop_rate"))
        cfg.chain.hop_rate = parse_double(path, *e, "hop_rate");
      cfg.chain.dissipative = dissipative;
      cfg.chain.dephasing = dephasing;
      cfg.chain.statistics = statistics;
      try {
        cfg.network = build_chain(cfg.chain);
      } catch (const Error& err) {
        throw ConfigError(path + ": [network]: " + err.what());
      }
    } else {
      if (r.find("hop_rate"))
        throw ConfigError(path + ": [network]: hop_rate applies to chains only");
      const fs::path file =
          fs::path(path).parent_path() / fs::path(matrix_file->value);
      cfg.matrix_file = file.string();
      cfg.network.hopping =
          read_matrix_file(path, file, matrix_file->line, &cfg.matrix_hash);
      const Eigen::Index n = cfg.network.hopping.rows();
      cfg.network.loss = Eigen::VectorXd::Zero(n);
      cfg.network.gain = Eigen::VectorXd::Zero(n);
      for (const auto& node : dissipative) {
        if (node.node < 1 || node.node > n)
          throw ConfigError(path + ": [network]: dissipative node " +
                            std::to_string(node.node) + " outside 1.." +
                            std::to_string(n));
        cfg.network.loss(node.node - 1) = node.loss;
        cfg.network.gain(node.node - 1) = node.gain;
      }
      cfg.network.dephasing = dephasing;
      cfg.network.statistics = statistics;
      cfg.network.reference_rate = 1.0;
    }
    r.finish();

    const ValidationReport report = validate(cfg.network);
    if (!report.ok())
      throw ConfigError(path + ": network validation failed: " +
                        report.joined());
    cfg.network = symmetrized(std::move(cfg.network));
  }

  if (sections["spectrum"].present) {
    SectionReader r(path, "spectrum", sections["spectrum"]);
    if (Entry* e = r.find("target")) {
      cfg.spectrum.target = e->value;
      if (cfg.spectrum.target != "first" && cfg.spectrum.target != "second" &&
          cfg.spectrum.target != "both")
        fail(path, e->line, "field 'target': expected first, second or both");
    }
    r.finish();
  }

  if (sections["equilibrium"].present) {
    SectionReader r(path, "equilibrium", sections["equilibrium"]);
    r.finish();  // no parameters
  }

  if (sections["classical"].present) {
    SectionReader r(path, "classical", sections["classical"]);
    r.finish();  // no parameters; uses the network dephasing rate
  }

  if (sections["sweep"].present) {
    SectionReader r(path, "sweep", sections["sweep"]);
    cfg.sweep.grid = parse_grid(r);
    if (Entry* e = r.find("refine"))
      cfg.sweep.refine = parse_bool(path, *e, "refine");
    if (Entry* e = r.find("write_equilibria"))
      cfg.sweep.write_equilibria = parse_bool(path, *e, "write_equilibria");
    r.finish();
  }

  if (sections["evolve"].present) {
    SectionReader r(path, "evolve", sections["evolve"]);
    cfg.evolve.t_end = parse_double(path, r.require("t_end"), "t_end");
    if (!(cfg.evolve.t_end > 0.0))
      throw ConfigError(path + ": field 't_end': must be positive");
    if (Entry* e = r.find("dt_max")) {
      cfg.evolve.dt_max = parse_double(path, *e, "dt_max");
      if (!(cfg.evolve.dt_max > 0.0))
        fail(path, e->line, "field 'dt_max': must be positive");
    }
    if (Entry* e = r.find("observable")) {
      cfg.evolve.observable = e->value;
      if (cfg.evolve.observable != "mean" &&
          cfg.evolve.observable != "correlation" &&
          cfg.evolve.observable != "both")
        fail(path, e->line,
             "field 'observable': expected mean, correlation or both");
    }
    if (Entry* e = r.find("write_trajectory"))
      cfg.evolve.write_trajectory = parse_bool(path, *e, "write_trajectory");
    if (Entry* e = r.find("max_samples")) {
      cfg.evolve.max_samples =
          static_cast<int>(parse_int(path, *e, "max_samples"));
      if (cfg.evolve.max_samples < 2)
        fail(path, e->line, "field 'max_samples': need at least 2");
    }
    r.finish();
  } else if (command == Command::Evolve) {
    throw ConfigError(path + ": evolve requires an [evolve] section with t_end");
  }

  if (sections["darkstates"].present) {
    SectionReader r(path, "darkstates", sections["darkstates"]);
    if (Entry* e = r.find("tol")) {
      cfg.darkstates.tol = parse_double(path, *e, "tol");
      if (!(cfg.darkstates.tol > 0.0))
        fail(path, e->line, "field 'tol': must be positive");
    }
    if (Entry* e = r.find("quasi_tol")) {
      cfg.darkstates.quasi_tol = parse_double(path, *e, "quasi_tol");
    }
    if (cfg.darkstates.quasi_tol < cfg.darkstates.tol)
      throw ConfigError(path + ": field 'quasi_tol': must be >= tol");
    r.finish();
  }

  if (sections["ensemble"].present) {
    SectionReader r(path, "ensemble", sections["ensemble"]);
    Entry& p = r.require("p");
    cfg.ensemble.p = parse_double(path, p, "p");
    if (!(cfg.ensemble.p > 0.0 && cfg.ensemble.p < 1.0))
      fail(path, p.line, "field 'p': p outside (0,1)");
    Entry& gamma = r.require("gamma");
    cfg.ensemble.gamma = parse_double(path, gamma, "gamma");
    if (!(cfg.ensemble.gamma > 0.0))
      fail(path, gamma.line, "field 'gamma': must be positive");
    Entry& ratio = r.require("beta_ratio");
    cfg.ensemble.beta_ratio = parse_double(path, ratio, "beta_ratio");
    if (!(cfg.ensemble.beta_ratio >= 0.0 && cfg.ensemble.beta_ratio < 1.0))
      fail(path, ratio.line, "field 'beta_ratio': must lie in [0,1)");
    if (Entry* e = r.find("n_realizations")) {
      cfg.ensemble.n_realizations =
          static_cast<int>(parse_int(path, *e, "n_realizations"));
      if (cfg.ensemble.n_realizations < 1)
        fail(path, e->line, "field 'n_realizations': must be positive");
    }
    if (Entry* e = r.find("seed"))
      cfg.ensemble.seed = parse_uint64(path, *e, "seed");
    cfg.ensemble.grid = parse_grid(r);
    r.finish();

    if (command == Command::Ensemble) {
      if (!cfg.network_is_chain || !cfg.chain.dissipative.empty())
        throw ConfigError(path +
                          ": ensemble requires a dissipation-free chain in "
                          "[network]");
    }
  } else if (command == Command::Ensemble) {
    throw ConfigError(path + ": ensemble requires an [ensemble] section");
  }

  return cfg;
}

std::string ExperimentConfig::normalized() const {
  std::ostringstream os;
  os << "[network]\n";
  if (network_is_chain) {
    os << "n_sites = " << chain.n_sites << "\n";
    os << "hop_rate = " << format_real(chain.hop_rate) << "\n";
    if (!chain.dissipative.empty()) {
      os << "dissipative =";
      for (const auto& node : chain.dissipative)
        os << " " << node.node << ":" << format_real(node.loss) << ":"
           << format_real(node.gain);
      os << "\n";
    }
  } else {
    os << "matrix_file = " << matrix_file << "\n";
    const std::vector<int> sites = dissipative_sites(network);
    if (!sites.empty()) {
      os << "dissipative =";
      for (int site : sites)
        os << " " << site << ":" << format_real(network.loss(site - 1)) << ":"
           << format_real(network.gain(site - 1));
      os << "\n";
    }
  }
  os << "dephasing = " << format_real(network.dephasing) << "\n";
  os << "statistics = " << lindnet::to_string(network.statistics) << "\n";

  auto emit_grid = [&os](const GridParams& grid) {
    os << "grid = " << grid.kind << "\n";
    if (grid.kind == "explicit") {
      os << "grid_values =";
      for (double v : grid.values) os << " " << format_real(v);
      os << "\n";
    } else {
      os << "grid_min = " << format_real(grid.min) << "\n";
      os << "grid_max = " << format_real(grid.max) << "\n";
      os << "grid_points = " << grid.points << "\n";
    }
    os << "include_zero = " << (grid.include_zero ? "true" : "false") << "\n";
  };

  os << "\n[" << to_string(command) << "]\n";
  switch (command) {
    case Command::Spectrum:
      os << "target = " << spectrum.target << "\n";
      break;
    case Command::Equilibrium:
    case Command::Classical:
      break;
    case Command::Sweep:
      emit_grid(sweep.grid);
      os << "refine = " << (sweep.refine ? "true" : "false") << "\n";
      os << "write_equilibria = " << (sweep.write_equilibria ? "true" : "false")
         << "\n";
      break;
    case Command::Evolve:
      os << "t_end = " << format_real(evolve.t_end) << "\n";
      if (evolve.dt_max > 0.0)
        os << "dt_max = " << format_real(evolve.dt_max) << "\n";
      os << "observable = " << evolve.observable << "\n";
      os << "write_trajectory = " << (evolve.write_trajectory ? "true" : "false")
         << "\n";
      os << "max_samples = " << evolve.max_samples << "\n";
      break;
    case Command::DarkStates:
      os << "tol = " << format_real(darkstates.tol) << "\n";
      os << "quasi_tol = " << format_real(darkstates.quasi_tol) << "\n";
      break;
    case Command::Ensemble:
      os << "p = " << format_real(ensemble.p) << "\n";
      os << "gamma = " << format_real(ensemble.gamma) << "\n";
      os << "beta_ratio = " << format_real(ensemble.beta_ratio) << "\n";
      os << "n_realizations = " << ensemble.n_realizations << "\n";
      os << "seed = " << ensemble.seed << "\n";
      emit_grid(ensemble.grid);
      break;
  }
  return os.str();
}

}  // namespace lindnet::app
