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

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "resetlb/qop.hpp"

namespace resetlb {

/// (||rho^{T_A}||_1 - 1) / 2, computed as the magnitude of the negative
/// part of the spectrum of the partial transpose. Eigenvalues within
/// 8 * dim * eps * max|eigenvalue| of zero count as zero, so product states
/// give exactly 0.
double negativity(const DensityMatrix& rho, const Bipartition& part);
double negativity(const Matrix& rho, const Bipartition& part);

/// Negativity of a two-qubit state across its only cut.
double pair_negativity(const Matrix& rho);

/// All 2^{n-1} - 1 cuts of n qubits, each listed once with qubit 0 in A.
std::vector<Bipartition> all_bipartitions(int n_qubits);

struct NegativityReport {
  std::vector<std::pair<Bipartition, double>> per_bipartition;
  double average = 0.0;
  int bipartition_count = 0;
};

NegativityReport average_negativity(const DensityMatrix& rho);

/// Poisson distribution e^{-lambda} lambda^n / n! truncated to
/// [n_min, n_max] and renormalized.
class PoissonWeighting {
 public:
  PoissonWeighting(double lambda, int n_min, int n_max);

  double lambda() const noexcept { return lambda_; }
  int n_min() const noexcept { return n_min_; }
  int n_max() const noexcept { return n_max_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(int n) const;

  /// Same lambda on [max(n_min, lo), n_max], renormalized.
  PoissonWeighting restricted_from(int lo) const;

 private:
  double lambda_;
  int n_min_;
  int n_max_;
  std::vector<double> weights_;
};

/// Particle number to state of that many qubits.
using StatesByCount = std::map<int, DensityMatrix>;

/// The two qubits kept by the reduced measures.
inline constexpr int kReducedPair[2] = {0, 1};

/// sum_n w(n) Nbar(rho_n); counts below two contribute zero.
double measure_poisson_avg_negativity(const StatesByCount& states, const PoissonWeighting& w);

/// sum_n w~(n) N(tr_{n->2} rho_n) with w restricted to n >= 2.
double measure_reduced_avg(const StatesByCount& states, const PoissonWeighting& w);

/// N(sum_n w~(n) tr_{n->2} rho_n) with w restricted to n >= 2.
double measure_avg_state_negativity(const StatesByCount& states, const PoissonWeighting& w);

}  // namespace resetlb
