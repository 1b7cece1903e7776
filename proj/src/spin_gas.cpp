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

#include "resetlb/spin_gas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "resetlb/entanglement.hpp"

namespace resetlb {
namespace {

constexpr int kMaxSubset = 4;
constexpr std::uint64_t kBootstrapSeed = 0x5eedb007ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(GasRng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int wrap(int v, int n) { return ((v % n) + n) % n; }

}  // namespace

void GasConfig::validate() const {
  if (rows < 2 || cols < 2) throw std::invalid_argument("lattice dimensions must be at least 2");
  if (n_env < 0) throw std::invalid_argument("environment size must be non-negative");
  if (!std::isfinite(psi) || !std::isfinite(phi)) throw std::invalid_argument("phases must be finite");
  if (!(exchange_prob >= 0.0 && exchange_prob <= 1.0)) {
    throw std::invalid_argument("exchange probability must lie in [0, 1]");
  }
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
}

PhaseMatrix::PhaseMatrix(int n_qubits)
    : neighbours_(static_cast<std::size_t>(n_qubits)), active_(static_cast<std::size_t>(n_qubits), true) {}

int PhaseMatrix::add_qubit() {
  neighbours_.emplace_back();
  active_.push_back(true);
  return size() - 1;
}

void PhaseMatrix::check(int i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("qubit " + std::to_string(i) + " out of range");
}

void PhaseMatrix::add_phase(int i, int j, double phase) {
  check(i);
  check(j);
  if (i == j) throw std::invalid_argument("a qubit cannot collide with itself");
  if (!active(i) || !active(j)) throw std::logic_error("retired qubits cannot acquire phase");
  if (phase == 0.0) return;
  neighbours_[static_cast<std::size_t>(i)][j] += phase;
  neighbours_[static_cast<std::size_t>(j)][i] += phase;
}

double PhaseMatrix::phase(int i, int j) const {
  check(i);
  check(j);
  const auto& n = neighbours_[static_cast<std::size_t>(i)];
  const auto it = n.find(j);
  return it == n.end() ? 0.0 : it->second;
}

const std::map<int, double>& PhaseMatrix::neighbours(int i) const {
  check(i);
  return neighbours_[static_cast<std::size_t>(i)];
}

void PhaseMatrix::retire(int i) {
  check(i);
  active_[static_cast<std::size_t>(i)] = false;
}

Eigen::MatrixXd PhaseMatrix::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), size());
  for (int i = 0; i < size(); ++i) {
    for (const auto& [j, v] : neighbours_[static_cast<std::size_t>(i)]) out(i, j) = v;
  }
  return out;
}

GasState initial_gas_state(const GasConfig& config, GasRng& rng) {
  config.validate();
  const int n = 2 + config.n_env;
  GasState st{PhaseMatrix(n), {}, {}};
  st.positions.push_back({config.rows / 2, config.cols / 2});
  st.positions.push_back({config.rows / 2, wrap(config.cols / 2 + 1, config.cols)});
  for (int k = 0; k < config.n_env; ++k) {
    const int row = static_cast<int>(rng() % static_cast<std::uint64_t>(config.rows));
    const int col = static_cast<int>(rng() % static_cast<std::uint64_t>(config.cols));
    st.positions.push_back({row, col});
  }
  for (int k = 0; k < n; ++k) st.qubit_of.push_back(k);
  return st;
}

void step(GasState& state, const GasConfig& config, GasRng& rng) {
  static constexpr int kMoves[5][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (Site& p : state.positions) {
    const auto& mv = kMoves[rng() % 5];
    p.row = wrap(p.row + mv[0], config.rows);
    p.col = wrap(p.col + mv[1], config.cols);
  }
  const std::size_t n = state.positions.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!(state.positions[a] == state.positions[b])) continue;
      const double ph = (a < 2 && b < 2) ? config.psi : config.phi;
      state.phases.add_phase(state.qubit_of[a], state.qubit_of[b], ph);
    }
  }
}

void exchange(GasState& state, int which) {
  if (which != 0 && which != 1) throw std::out_of_range("system particle must be 0 or 1");
  const auto idx = static_cast<std::size_t>(which);
  state.phases.retire(state.qubit_of[idx]);
  state.qubit_of[idx] = state.phases.add_qubit();
}

GasState run_trajectory(const GasConfig& config, GasRng& rng) {
  GasState st = initial_gas_state(config, rng);
  for (int t = 0; t < config.steps; ++t) {
    step(st, config, rng);
    for (int which = 0; which < 2; ++which) {
      if (uniform01(rng) < config.exchange_prob) exchange(st, which);
    }
  }
  return st;
}

DensityMatrix reduced_density(const PhaseMatrix& pm, std::span<const int> subset) {
  const int k = static_cast<int>(subset.size());
  if (k < 1 || k > kMaxSubset) throw std::invalid_argument("subset size must be 1..4");
  std::vector<int> members(subset.begin(), subset.end());
  for (int q : members) {
    if (q < 0 || q >= pm.size()) throw std::out_of_range("subset qubit out of range");
  }
  {
    std::vector<int> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("subset has repeated qubits");
    }
  }
  auto position = [&](int q) {
    const auto it = std::find(members.begin(), members.end(), q);
    return it == members.end() ? -1 : static_cast<int>(it - members.begin());
  };

  // Couplings of each traced qubit to the members of the subset.
  std::map<int, std::array<double, kMaxSubset>> outside;
  for (int a = 0; a < k; ++a) {
    for (const auto& [q, v] : pm.neighbours(members[static_cast<std::size_t>(a)])) {
      if (position(q) >= 0) continue;
      auto [it, inserted] = outside.try_emplace(q);
      if (inserted) it->second.fill(0.0);
      it->second[static_cast<std::size_t>(a)] += v;
    }
  }

  const int d = 1 << k;
  auto bit = [k](int s, int a) { return (s >> (k - 1 - a)) & 1; };
  std::vector<double> theta(static_cast<std::size_t>(d), 0.0);
  for (int s = 0; s < d; ++s) {
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        if (bit(s, a) && bit(s, b)) {
          theta[static_cast<std::size_t>(s)] +=
              pm.phase(members[static_cast<std::size_t>(a)], members[static_cast<std::size_t>(b)]);
        }
      }
    }
  }

  Matrix rho(d, d);
  for (int sp = 0; sp < d; ++sp) {
    for (int s = 0; s < d; ++s) {
      cplx v = std::polar(1.0 / d, theta[static_cast<std::size_t>(s)] - theta[static_cast<std::size_t>(sp)]);
      for (const auto& [q, c] : outside) {
        double delta = 0.0;
        for (int a = 0; a < k; ++a) delta += c[static_cast<std::size_t>(a)] * (bit(s, a) - bit(sp, a));
        if (delta != 0.0) v *= 0.5 * (1.0 + std::polar(1.0, delta));
      }
      rho(s, sp) = v;
    }
  }
  return validate_density(rho, 1e-12);
}

std::uint64_t derive_run_seed(std::uint64_t seed, std::uint64_t run) {
  return splitmix64(splitmix64(seed) ^ run);
}

EnsembleResult run_ensemble(const GasConfig& config, int n_runs, int threads) {
  config.validate();
  if (n_runs < 1) throw std::invalid_argument("ensemble needs at least one run");
  threads = std::clamp(threads, 1, n_runs);

  std::vector<Matrix> per_run(static_cast<std::size_t>(n_runs));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int run = next++; run < n_runs; run = next++) {
      GasRng rng(derive_run_seed(config.seed, static_cast<std::uint64_t>(run)));
      const GasState st = run_trajectory(config, rng);
      const auto ids = st.system_ids();
      per_run[static_cast<std::size_t>(run)] = reduced_density(st.phases, ids).matrix();
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  EnsembleResult out;
  out.n_runs = n_runs;
  out.mean = Matrix::Zero(4, 4);
  for (const Matrix& m : per_run) out.mean += m;
  out.mean /= static_cast<double>(n_runs);
  out.negativity = pair_negativity(out.mean);

  GasRng boot(kBootstrapSeed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int b = 0; b < kBootstrapSamples; ++b) {
    Matrix m = Matrix::Zero(4, 4);
    for (int i = 0; i < n_runs; ++i) m += per_run[boot() % static_cast<std::uint64_t>(n_runs)];
    const double neg = pair_negativity(m / static_cast<double>(n_runs));
    sum += neg;
    sum_sq += neg * neg;
  }
  const double mean = sum / kBootstrapSamples;
  out.stderr_estimate = std::sqrt(std::max(0.0, sum_sq / kBootstrapSamples - mean * mean));
  return out;
}

}  // namespace resetlb
