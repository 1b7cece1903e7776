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

// Command-line front end: experiment configs, the subcommands and the
// verify registry. Everything here is callable without a process boundary.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resetlb/liouville.hpp"
#include "resetlb/spin_gas.hpp"

namespace resetlb::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitVerify = 3,
};

struct SweepAxis {
  /// Dotted path into the resolved config, e.g. "reset.r".
  std::string param;
  double min = 0.0;
  double max = 0.0;
  int points = 1;
  bool log = false;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  /// Input merged over the defaults for its model, sweep included.
  Json resolved;
  std::string model;
  std::string unit;
  std::vector<SweepAxis> sweep;
  std::string output;
  std::uint64_t seed = 1;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig parse_config(const Json& input);
ExperimentConfig load_config(const std::string& path);

struct GridPoint {
  std::vector<double> coords;
  /// Resolved config with the sweep coordinates substituted.
  Json config;
};

/// Cartesian product of the sweep axes; the last axis varies fastest.
std::vector<GridPoint> expand_grid(const ExperimentConfig& config);

ModelSpec model_from(const Json& resolved);
ModelSpec model_from(const Json& resolved, int n_qubits);
GasConfig gas_from(const Json& resolved);
DensityMatrix initial_state_from(const Json& resolved, const ModelSpec& model);

struct RunOptions {
  int threads = 1;
  bool dump_states = false;
  bool timestamp = true;
  double tol_scale = 1.0;
};

struct CommandOutput {
  std::string csv;
  /// JSON matrix dump, present with --dump-states.
  std::optional<std::string> states;
};

CommandOutput cmd_steady(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_evolve(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_spectrum(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_spingas(const ExperimentConfig& config, const RunOptions& opts);
CommandOutput cmd_measures(const ExperimentConfig& config, const RunOptions& opts);

/// 17 significant digits, '.' decimal point.
std::string format_number(double x);

/// Runs fn(i) for i in [0, count) on up to `threads` workers and returns the
/// results in index order. The first exception thrown is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& fn);

struct CheckResult {
  bool passed = false;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Formulas the verify checks compare against; replaceable for negative
/// controls.
struct VerifyContext {
  double tol_scale = 1.0;
  std::function<double(double g, double gamma, double r)> dephasing_ising_reset;
  std::function<Matrix(double B, double s, double g, double omega, double r)> sxsx_reset;
  std::function<Matrix(double B, double C, double s, double g, double omega, double r)> local_noise_reset;

  VerifyContext();
};

struct VerifyCheck {
  std::string name;
  std::string module;
  std::string formula;
  std::function<CheckResult(const VerifyContext&)> run;
};

const std::vector<VerifyCheck>& verify_registry();

struct VerifyOutcome {
  bool all_passed = true;
  std::vector<std::string> failed;
};

/// Runs every check whose name contains `filter` and prints one line each.
VerifyOutcome run_verify(const VerifyContext& ctx, std::ostream& out, const std::string& filter = "");

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace resetlb::cli

#include "resetlb/cli_parallel.hpp"
