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

// Lattice spin gas. Particles carry qubits that start in |+>; each collision
// applies the diagonal phase gate diag(1, 1, 1, e^{i phase}) to the pair, so
// the joint state is always a weighted graph state described by its phases.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "resetlb/qop.hpp"

namespace resetlb {

struct GasConfig {
  int rows = 6;
  int cols = 6;
  int n_env = 8;
  /// Phase picked up by a system-system collision.
  double psi = 0.1;
  /// Phase picked up by any collision involving an environment qubit.
  double phi = 0.001;
  /// Probability per step and per system qubit of an exchange.
  double exchange_prob = 0.0;
  int steps = 500;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Accumulated two-body phases over every qubit that ever existed.
class PhaseMatrix {
 public:
  PhaseMatrix() = default;
  explicit PhaseMatrix(int n_qubits);

  int size() const noexcept { return static_cast<int>(neighbours_.size()); }
  int add_qubit();
  void add_phase(int i, int j, double phase);
  double phase(int i, int j) const;
  /// Qubits sharing a nonzero phase with i, in ascending order.
  const std::map<int, double>& neighbours(int i) const;

  bool active(int i) const { return active_.at(static_cast<std::size_t>(i)); }
  /// A retired qubit keeps its phases but never acquires new ones.
  void retire(int i);

  Eigen::MatrixXd dense() const;

 private:
  void check(int i) const;

  std::vector<std::map<int, double>> neighbours_;
  std::vector<bool> active_;
};

struct Site {
  int row;
  int col;
  bool operator==(const Site&) const = default;
};

struct GasState {
  PhaseMatrix phases;
  /// Position of every particle; particles 0 and 1 are the system.
  std::vector<Site> positions;
  /// Qubit currently carried by each particle.
  std::vector<int> qubit_of;

  std::array<int, 2> system_ids() const { return {qubit_of[0], qubit_of[1]}; }
};

using GasRng = std::mt19937_64;

/// System particles on horizontally adjacent sites at the lattice centre,
/// environment particles on uniformly random sites.
GasState initial_gas_state(const GasConfig& config, GasRng& rng);

/// Every particle stays or hops to one of its four neighbours with equal
/// probability (periodic boundaries); then every co-located pair picks up
/// psi if both are system qubits and phi otherwise.
void step(GasState& state, const GasConfig& config, GasRng& rng);

/// Retires the qubit of system particle `which` and installs a fresh |+>
/// qubit on the same particle.
void exchange(GasState& state, int which);

/// One full run: `steps` rounds of step() followed by independent exchanges.
GasState run_trajectory(const GasConfig& config, GasRng& rng);

/// Reduced state of the qubits in `subset` (in the given order), with every
/// other qubit traced out.
DensityMatrix reduced_density(const PhaseMatrix& pm, std::span<const int> subset);

/// Stream for run `run` of an ensemble seeded with `seed`.
std::uint64_t derive_run_seed(std::uint64_t seed, std::uint64_t run);

struct EnsembleResult {
  Matrix mean;
  double negativity = 0.0;
  /// Bootstrap standard error of the negativity over runs.
  double stderr_estimate = 0.0;
  int n_runs = 0;
};

inline constexpr int kBootstrapSamples = 200;

/// Runs are summed in run order, so the result does not depend on `threads`.
EnsembleResult run_ensemble(const GasConfig& config, int n_runs, int threads = 1);

}  // namespace resetlb
