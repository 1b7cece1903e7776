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

// Analytic steady states, negativities, spectra and transient solutions of
// the two-qubit models. Matrices use the standard basis |00>, |01>, |10>, |11>.

#pragma once

#include <array>
#include <utility>
#include <vector>

#include "resetlb/qop.hpp"

namespace resetlb::closed_form {

/// The bracketed expression of the dephasing + Ising + reset(|+>) negativity
/// before clipping at zero; valid for omega = 0.
double neg_dephasing_ising_reset_raw(double g, double gamma, double r);

/// max(0, raw). Throws std::invalid_argument if g, gamma and r are all zero.
double neg_dephasing_ising_reset(double g, double gamma, double r);

/// The common value of the anti-diagonal steady-state entries of the same
/// model at omega = 0.
double antidiagonal_dephasing_ising_reset(double g, double gamma, double r);

struct SteadyPair {
  Matrix rho;
  double negativity;
};

/// sxsx coupling with local noise C = B/2, no reset.
SteadyPair steady_sxsx_noreset(double B, double s, double g, double omega);

/// sxsx coupling with local noise C = B/2 and reset to |1> on both qubits.
/// omega is the model splitting of omega/2 sum Z.
SteadyPair steady_sxsx_reset(double B, double s, double g, double omega, double r);

/// Thermal-state negativity of g (ZZ + b (X1 + X2)) before clipping.
double thermal_negativity_raw(double g, double b, double beta);
double thermal_negativity_ising_field(double g, double b, double beta);

/// Normalized ground state of g (ZZ + b (X1 + X2)) for g > 0, b != 0.
Vector ising_transverse_ground_state(double b);

/// Smallest beta in (lo, hi) where the thermal negativity switches on, by
/// bisection on the raw expression. Requires a sign change on the bracket.
double thermal_crossing_beta(double g, double b, double lo, double hi, double tol = 1e-14);

struct AppendixAParams {
  double g;
  double gamma;
  double omega;
  double r;
};

/// Integration constants D2, D3, D4, OD1..OD4, AD1, AD2 of the dephasing +
/// Ising + reset(|+>) transient solution.
struct ClosedFormSolution {
  AppendixAParams params;
  std::array<cplx, 9> constants{};
};

/// Full 4x4 state at time t; the lower triangle is filled by Hermiticity.
Matrix appendixA_solution(const ClosedFormSolution& sol, double t);

/// Constants reproducing rho0 at t = 0. Throws std::invalid_argument when the
/// parameters make the square-root branch degenerate and no nudge resolves it.
ClosedFormSolution fit_appendixA(const AppendixAParams& params, const Matrix& rho0);

/// General steady state with local noise (B, C, s), Ising coupling, free
/// splitting omega and reset to |+> on both qubits.
Matrix appendixB_steady(double B, double C, double s, double g, double omega, double r);

/// Eigenvalues of the dephasing + Ising + reset(|+>) Liouvillian with their
/// multiplicities, in the order 1, 2, 1, 2, 1+1, 2+2, 2+2.
std::vector<std::pair<cplx, int>> spectrum_dephasing_reset(double g, double gamma, double omega,
                                                           double r);

}  // namespace resetlb::closed_form
