// Copyright 2026 The resetlb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "resetlb/cli.hpp"
#include "resetlb/dynamics.hpp"
#include "resetlb/entanglement.hpp"

namespace resetlb::cli {
namespace {

inline constexpr int kMaxMeasureQubits = 5;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opts) {
    out_ << "# resetlb " << command << "\n";
    out_ << "# seed: " << cfg.seed << "\n";
    if (opts.timestamp) out_ << "# generated: " << utc_timestamp() << "\n";
    out_ << "# config:\n";
    std::istringstream lines(cfg.resolved.dump(2));
    std::string line;
    while (std::getline(lines, line)) out_ << "#   " << line << "\n";
  }

  void columns(const ExperimentConfig& cfg, const std::vector<std::string>& names) {
    std::vector<std::string> all;
    for (const SweepAxis& a : cfg.sweep) all.push_back(a.param);
    all.insert(all.end(), names.begin(), names.end());
    for (std::size_t i = 0; i < all.size(); ++i) out_ << (i ? "," : "") << all[i];
    out_ << "\n";
  }

  void row(const std::vector<double>& coords, const std::vector<double>& values) {
    bool first = true;
    for (double v : coords) {
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    for (double v : values) {
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    out_ << "\n";
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

Json matrix_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ii = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

Json coords_json(const ExperimentConfig& cfg, const std::vector<double>& coords) {
  Json j = Json::object();
  for (std::size_t k = 0; k < coords.size(); ++k) j[cfg.sweep[k].param] = coords[k];
  return j;
}

std::string describe_point(const ExperimentConfig& cfg, const std::vector<double>& coords) {
  if (coords.empty()) return "at the single configured point";
  std::string s = "at";
  for (std::size_t k = 0; k < coords.size(); ++k) {
    s += (k ? ", " : " ") + cfg.sweep[k].param + "=" + format_number(coords[k]);
  }
  return s;
}

// Runs fn over the grid, tagging failures with their coordinates.
template <typename T>
std::vector<T> over_grid(const ExperimentConfig& cfg, const std::vector<GridPoint>& grid, int threads,
                         const std::function<T(const GridPoint&)>& fn) {
  return parallel_map<T>(grid.size(), threads, [&](std::size_t i) -> T {
    try {
      return fn(grid[i]);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (" + describe_point(cfg, grid[i].coords) + ")");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(e.what()) + " (" + describe_point(cfg, grid[i].coords) + ")");
    } catch (const Error& e) {
      throw SolverError(std::string(e.what()) + " (" + describe_point(cfg, grid[i].coords) + ")");
    }
  });
}

double state_negativity(const DensityMatrix& rho) {
  if (rho.n_qubits() < 2) return 0.0;
  if (rho.n_qubits() == 2) return pair_negativity(rho.matrix());
  return average_negativity(rho).average;
}

void require_master_equation(const ExperimentConfig& cfg, const char* command) {
  if (cfg.model == "spingas") {
    throw ConfigError(std::string(command) + " needs a gas or strongly_coupled model");
  }
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CommandOutput cmd_steady(const ExperimentConfig& cfg, const RunOptions& opts) {
  require_master_equation(cfg, "steady");
  const std::vector<GridPoint> grid = expand_grid(cfg);
  const auto states = over_grid<DensityMatrix>(cfg, grid, opts.threads, [](const GridPoint& p) {
    return steady_state(build_liouvillian(model_from(p.config)));
  });
  CsvWriter csv("steady", cfg, opts);
  csv.columns(cfg, {"negativity", "min_eigenvalue"});
  Json dump = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row(grid[i].coords, {state_negativity(states[i]), hermitian_eigenvalues(states[i].matrix()).minCoeff()});
    if (opts.dump_states) {
      dump.push_back({{"point", coords_json(cfg, grid[i].coords)}, {"rho", matrix_json(states[i].matrix())}});
    }
  }
  CommandOutput out{csv.str(), std::nullopt};
  if (opts.dump_states) out.states = dump.dump(1) + "\n";
  return out;
}

CommandOutput cmd_evolve(const ExperimentConfig& cfg, const RunOptions& opts) {
  require_master_equation(cfg, "evolve");
  const std::vector<GridPoint> grid = expand_grid(cfg);
  const auto runs = over_grid<EvolutionResult>(cfg, grid, opts.threads, [](const GridPoint& p) {
    const ModelSpec m = model_from(p.config);
    const double t_max = p.config["evolve"]["t_max"].get<double>();
    const int points = p.config["evolve"]["points"].get<int>();
    std::vector<double> times;
    for (int k = 0; k < points; ++k) times.push_back(points == 1 ? 0.0 : t_max * k / (points - 1));
    return evolve(build_liouvillian(m), initial_state_from(p.config, m), times);
  });
  CsvWriter csv("evolve", cfg, opts);
  csv.columns(cfg, {"t", "negativity", "trace", "min_eigenvalue"});
  Json dump = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t k = 0; k < runs[i].times.size(); ++k) {
      const DensityMatrix& rho = runs[i].states[k];
      csv.row(grid[i].coords, {runs[i].times[k], state_negativity(rho), rho.matrix().trace().real(),
                               hermitian_eigenvalues(rho.matrix()).minCoeff()});
      if (opts.dump_states) {
        dump.push_back({{"point", coords_json(cfg, grid[i].coords)}, {"t", runs[i].times[k]},
                        {"rho", matrix_json(rho.matrix())}});
      }
    }
  }
  CommandOutput out{csv.str(), std::nullopt};
  if (opts.dump_states) out.states = dump.dump(1) + "\n";
  return out;
}

CommandOutput cmd_spectrum(const ExperimentConfig& cfg, const RunOptions& opts) {
  require_master_equation(cfg, "spectrum");
  const std::vector<GridPoint> grid = expand_grid(cfg);
  const auto reports = over_grid<SpectrumReport>(cfg, grid, opts.threads, [](const GridPoint& p) {
    return spectrum(build_liouvillian(model_from(p.config)));
  });
  CsvWriter csv("spectrum", cfg, opts);
  csv.columns(cfg, {"re", "im", "multiplicity"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const SpectrumGroup& g : reports[i].groups) {
      csv.row(grid[i].coords, {g.value.real(), g.value.imag(), static_cast<double>(g.multiplicity)});
    }
  }
  return {csv.str(), std::nullopt};
}

CommandOutput cmd_spingas(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (cfg.model != "spingas") throw ConfigError("spingas needs model 'spingas'");
  const std::vector<GridPoint> grid = expand_grid(cfg);
  // Grid points run in order; the worker pool is spent on the runs inside.
  const auto results = over_grid<EnsembleResult>(cfg, grid, 1, [&](const GridPoint& p) {
    return run_ensemble(gas_from(p.config), p.config["spingas"]["runs"].get<int>(), opts.threads);
  });
  CsvWriter csv("spingas", cfg, opts);
  csv.columns(cfg, {"exchange_prob", "negativity", "stderr", "runs"});
  Json dump = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row(grid[i].coords, {grid[i].config["spingas"]["exchange_prob"].get<double>(), results[i].negativity,
                             results[i].stderr_estimate, static_cast<double>(results[i].n_runs)});
    if (opts.dump_states) {
      dump.push_back({{"point", coords_json(cfg, grid[i].coords)}, {"rho", matrix_json(results[i].mean)}});
    }
  }
  CommandOutput out{csv.str(), std::nullopt};
  if (opts.dump_states) out.states = dump.dump(1) + "\n";
  return out;
}

CommandOutput cmd_measures(const ExperimentConfig& cfg, const RunOptions& opts) {
  require_master_equation(cfg, "measures");
  const Json& ms = cfg.resolved["measures"];
  const int n_min = ms["n_min"].get<int>();
  const int n_max = ms["n_max"].get<int>();
  if (n_min < 0 || n_max < 2 || n_max < n_min) {
    throw ConfigError("measures need 0 <= n_min <= n_max and n_max >= 2");
  }
  if (n_max > kMaxMeasureQubits && !ms["allow_large"].get<bool>()) {
    throw ConfigError("measures.n_max = " + std::to_string(n_max) + " exceeds the memory guard of " +
                      std::to_string(kMaxMeasureQubits) + " qubits (set measures.allow_large to override)");
  }
  const std::vector<GridPoint> grid = expand_grid(cfg);
  std::vector<std::pair<std::size_t, int>> jobs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int n = std::max(2, n_min); n <= n_max; ++n) jobs.emplace_back(i, n);
  }
  // Largest systems first so the pool stays busy.
  std::stable_sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<GridPoint> job_grid;
  for (const auto& [i, n] : jobs) {
    GridPoint p = grid[i];
    p.config["n_qubits"] = n;
    job_grid.push_back(std::move(p));
  }
  const auto states = over_grid<DensityMatrix>(cfg, job_grid, opts.threads, [](const GridPoint& p) {
    return steady_state(build_liouvillian(model_from(p.config)));
  });

  std::vector<StatesByCount> by_point(grid.size());
  for (std::size_t k = 0; k < jobs.size(); ++k) by_point[jobs[k].first].emplace(jobs[k].second, states[k]);

  CsvWriter csv("measures", cfg, opts);
  csv.columns(cfg, {"measure_i", "measure_ii", "measure_iii"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PoissonWeighting w(grid[i].config["measures"]["lambda"].get<double>(), n_min, n_max);
    csv.row(grid[i].coords, {measure_poisson_avg_negativity(by_point[i], w), measure_reduced_avg(by_point[i], w),
                             measure_avg_state_negativity(by_point[i], w)});
  }
  return {csv.str(), std::nullopt};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state entanglement under reset: master-equation and spin-gas simulations"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int threads = 0;
  bool dump_states = false;
  bool no_timestamp = false;
  double tol = 1.0;
  std::string filter;

  app.add_option("--config", config_path, "Experiment config (JSON)");
  app.add_option("--out", out_path, "Output CSV path (default: config 'output', else stdout)");
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (default: RESETLB_THREADS or 1)")
                          ->check(CLI::PositiveNumber);
  app.add_flag("--dump-states", dump_states, "Also write density matrices as JSON next to the CSV");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp line from the CSV header");
  app.add_option("--tol", tol, "Multiplier applied to every verify tolerance")->check(CLI::PositiveNumber);

  const char* names[] = {"steady", "evolve", "spectrum", "spingas", "measures"};
  std::map<std::string, CLI::App*> subs;
  for (const char* name : names) subs[name] = app.add_subcommand(name);
  subs["steady"]->description("Steady-state negativity over the sweep grid");
  subs["evolve"]->description("Time evolution: negativity, trace and minimum eigenvalue");
  subs["spectrum"]->description("Liouvillian eigenvalues grouped by multiplicity");
  subs["spingas"]->description("Spin-gas ensemble negativity with bootstrap standard error");
  subs["measures"]->description("Poisson-weighted multipartite measures over the reset rate");
  CLI::App* verify = app.add_subcommand("verify", "Closed-form versus numerical cross-checks");
  verify->add_option("--filter", filter, "Only run checks whose name contains this text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  RunOptions opts;
  opts.dump_states = dump_states;
  opts.timestamp = !no_timestamp;
  opts.tol_scale = tol;
  opts.threads = 1;
  if (threads_opt->count() > 0) {
    opts.threads = threads;
  } else if (const char* env = std::getenv("RESETLB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      err << "error: RESETLB_THREADS must be a positive integer\n";
      return kExitConfig;
    }
    opts.threads = static_cast<int>(v);
  }

  if (verify->parsed()) {
    VerifyContext ctx;
    ctx.tol_scale = tol;
    return run_verify(ctx, out, filter).all_passed ? kExitOk : kExitVerify;
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }
  try {
    if (config_path.empty()) throw ConfigError(command + " needs --config");
    ExperimentConfig cfg = load_config(config_path);
    if (seed_opt->count() > 0) {
      Json j = cfg.resolved;
      j["seed"] = seed;
      cfg = parse_config(j);
    }
    const std::string target = out_path.empty() ? cfg.output : out_path;
    if (opts.dump_states && target.empty()) throw ConfigError("--dump-states needs an output path");

    CommandOutput result;
    if (command == "steady") result = cmd_steady(cfg, opts);
    if (command == "evolve") result = cmd_evolve(cfg, opts);
    if (command == "spectrum") result = cmd_spectrum(cfg, opts);
    if (command == "spingas") result = cmd_spingas(cfg, opts);
    if (command == "measures") result = cmd_measures(cfg, opts);

    if (target.empty()) {
      out << result.csv;
    } else {
      std::ofstream f(target, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + target + "'");
      f << result.csv;
      if (result.states) {
        std::ofstream s(target + ".states.json", std::ios::binary);
        if (!s) throw ConfigError("cannot write '" + target + ".states.json'");
        s << *result.states;
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace resetlb::cli
