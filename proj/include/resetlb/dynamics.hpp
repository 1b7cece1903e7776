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

// Time evolution, steady states and spectra of Liouvillians.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "resetlb/liouville.hpp"

namespace resetlb {

struct EvolutionResult {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  /// Number of propagator applications.
  int steps = 0;
  /// Largest step-doubling discrepancy among the propagators used.
  double error_estimate = 0.0;
};

/// Local error bound per step.
inline constexpr double kEvolveTol = 1e-10;
/// Validation tolerance for evolved states.
inline constexpr double kEvolvedStateTol = 1e-8;

/// rho(t) = exp(Lambda t) rho0 on a non-decreasing grid of times t >= 0.
/// Throws SolverError when a state leaves the density-matrix set.
EvolutionResult evolve(const Superoperator& lambda, const DensityMatrix& rho0,
                       const std::vector<double>& times);

/// Relative tolerance (against the spectral radius) for zero eigenvalues.
inline constexpr double kNullTol = 1e-10;
/// Above this Liouvillian size the steady state is found by inverse iteration.
inline constexpr Eigen::Index kDenseSteadyLimit = 256;

/// The unique normalized null vector of Lambda. Throws SolverError if the
/// null space is degenerate or missing, or if the result is not a valid state.
DensityMatrix steady_state(const Superoperator& lambda);

struct SpectrumGroup {
  cplx value;
  int multiplicity;
};

struct SpectrumReport {
  /// All D^2 eigenvalues, by real part descending.
  std::vector<cplx> eigenvalues;
  /// Eigenvalues merged when within grouping_tol of the group's first member.
  std::vector<SpectrumGroup> groups;
  double grouping_tol = 0.0;
};

SpectrumReport spectrum(const Superoperator& lambda, double grouping_tol = 1e-8);

struct ProfilePoint {
  double t;
  double negativity;
};

/// Average negativity of exp(Lambda t) rho_reset on the grid. Lambda is the
/// generator without the reset term.
std::vector<ProfilePoint> entangling_profile(const Superoperator& lambda_no_reset,
                                             const DensityMatrix& rho_reset,
                                             const std::vector<double>& t_grid);

/// Reset rates r with profile(c / r) above threshold, as the interval spanned
/// by the entangled grid points. Empty if the profile never exceeds threshold.
std::optional<std::pair<double, double>> predicted_entangled_window(
    const std::vector<ProfilePoint>& profile, double c = 2.0, double threshold = 1e-9);

}  // namespace resetlb
