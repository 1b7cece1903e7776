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

#include "resetlb/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace resetlb {
namespace {

const DensityMatrix& state_for(const StatesByCount& states, int n) {
  const auto it = states.find(n);
  if (it == states.end()) {
    throw std::invalid_argument("no state supplied for particle number " + std::to_string(n));
  }
  if (it->second.n_qubits() != n) {
    throw std::invalid_argument("state for particle number " + std::to_string(n) + " has " +
                                std::to_string(it->second.n_qubits()) + " qubits");
  }
  return it->second;
}

Matrix reduce_to_pair(const DensityMatrix& rho) {
  if (rho.n_qubits() == 2) return rho.matrix();
  return partial_trace(rho.matrix(), std::span<const int>(kReducedPair, 2));
}

}  // namespace

double negativity(const Matrix& rho, const Bipartition& part) {
  const Matrix pt = partial_transpose(rho, part);
  const Eigen::VectorXd ev = hermitian_eigenvalues(0.5 * (pt + pt.adjoint()));
  // Eigenvalues this close to zero are indistinguishable from roundoff.
  const double floor = 8.0 * static_cast<double>(ev.size()) * std::numeric_limits<double>::epsilon() *
                       ev.cwiseAbs().maxCoeff();
  double neg = 0.0;
  for (double e : ev) {
    if (e < -floor) neg -= e;
  }
  return neg;
}

double negativity(const DensityMatrix& rho, const Bipartition& part) {
  return negativity(rho.matrix(), part);
}

double pair_negativity(const Matrix& rho) {
  if (rho.rows() != 4) throw std::invalid_argument("pair negativity needs a two-qubit state");
  return negativity(rho, Bipartition(2, {0}));
}

std::vector<Bipartition> all_bipartitions(int n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("bipartitions need at least two qubits");
  std::vector<Bipartition> out;
  const std::uint64_t rest = std::uint64_t{1} << (n_qubits - 1);
  // Qubit 0 is always in A; the other qubits join A according to `mask`,
  // excluding the mask that would leave the complement empty.
  for (std::uint64_t mask = 0; mask + 1 < rest; ++mask) {
    std::vector<int> a{0};
    for (int q = 1; q < n_qubits; ++q) {
      if ((mask >> (q - 1)) & 1U) a.push_back(q);
    }
    out.emplace_back(n_qubits, std::move(a));
  }
  return out;
}

NegativityReport average_negativity(const DensityMatrix& rho) {
  if (rho.n_qubits() < 2) throw std::invalid_argument("average negativity needs n >= 2");
  NegativityReport report;
  double sum = 0.0;
  for (Bipartition& part : all_bipartitions(rho.n_qubits())) {
    const double n = negativity(rho, part);
    sum += n;
    report.per_bipartition.emplace_back(std::move(part), n);
  }
  report.bipartition_count = static_cast<int>(report.per_bipartition.size());
  report.average = sum / report.bipartition_count;
  return report;
}

PoissonWeighting::PoissonWeighting(double lambda, int n_min, int n_max)
    : lambda_(lambda), n_min_(n_min), n_max_(n_max) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("Poisson mean must be positive");
  }
  if (n_min < 0 || n_max < n_min) throw std::invalid_argument("invalid particle-number range");
  double total = 0.0;
  for (int n = n_min; n <= n_max; ++n) {
    const double logp = -lambda + n * std::log(lambda) - std::lgamma(n + 1.0);
    weights_.push_back(std::exp(logp));
    total += weights_.back();
  }
  for (double& w : weights_) w /= total;
}

double PoissonWeighting::weight(int n) const {
  if (n < n_min_ || n > n_max_) return 0.0;
  return weights_[static_cast<std::size_t>(n - n_min_)];
}

PoissonWeighting PoissonWeighting::restricted_from(int lo) const {
  const int from = std::max(n_min_, lo);
  if (from > n_max_) throw std::invalid_argument("restricted particle-number range is empty");
  return PoissonWeighting(lambda_, from, n_max_);
}

double measure_poisson_avg_negativity(const StatesByCount& states, const PoissonWeighting& w) {
  double total = 0.0;
  for (int n = std::max(2, w.n_min()); n <= w.n_max(); ++n) {
    total += w.weight(n) * average_negativity(state_for(states, n)).average;
  }
  return total;
}

double measure_reduced_avg(const StatesByCount& states, const PoissonWeighting& w) {
  const PoissonWeighting wr = w.restricted_from(2);
  double total = 0.0;
  for (int n = wr.n_min(); n <= wr.n_max(); ++n) {
    total += wr.weight(n) * pair_negativity(reduce_to_pair(state_for(states, n)));
  }
  return total;
}

double measure_avg_state_negativity(const StatesByCount& states, const PoissonWeighting& w) {
  const PoissonWeighting wr = w.restricted_from(2);
  Matrix mix = Matrix::Zero(4, 4);
  for (int n = wr.n_min(); n <= wr.n_max(); ++n) {
    mix += wr.weight(n) * reduce_to_pair(state_for(states, n));
  }
  return pair_negativity(mix);
}

}  // namespace resetlb
