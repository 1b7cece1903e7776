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

// Hamiltonians and Lindblad generators as dense superoperators.
//
// Vectorization is column stacking throughout: vec(rho)[i + D*j] = rho(i, j),
// so vec(A rho B) = (B^T (x) A) vec(rho).

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "resetlb/qop.hpp"

namespace resetlb {

/// Local quantum-optical noise: B is the inversion decay rate, C the
/// polarization decay rate and s the stationary excited-state population.
struct GasNoiseParams {
  double B = 0.0;
  double C = 0.0;
  double s = 0.5;

  void validate() const;
};

/// Global heat bath coupling with strength gamma at inverse temperature beta.
struct ThermalBathParams {
  double gamma = 0.0;
  double beta = 1.0;

  void validate() const;
};

/// 1/2 I + b1 X + b2 Y + b3 Z. Requires b1^2 + b2^2 + b3^2 <= 1/4.
Matrix2 bloch_state(double b1, double b2, double b3);

/// Inverse of bloch_state: b_k = tr(rho sigma_k) / 2.
std::array<double, 3> bloch_components(const Matrix2& rho);

/// p |chi><chi| + (1 - p) I / 2.
Matrix2 mixed_state(double purity, const Eigen::Vector2cd& ket);

/// The p of p |chi><chi| + (1 - p) I / 2, i.e. twice the Bloch radius.
double purity_parameter(const Matrix2& rho);

/// Reset of qubit j to states[j] at rate r.
struct ResetSpec {
  double r = 0.0;
  std::vector<Matrix2> states;

  static ResetSpec uniform(double r, const Matrix2& state, int n_qubits);
  void validate(int n_qubits) const;
};

enum class HamiltonianKind {
  kIsing,
  kSxSx,
  kXYZ,
  kIsingTransverse,
  kIsingGradient,
  kCustom,
};

std::optional<HamiltonianKind> parse_hamiltonian_kind(std::string_view name);
std::string_view hamiltonian_kind_name(HamiltonianKind kind);

/// Pairwise couplings run over all pairs i < j. Every kind also receives the
/// free term omega/2 sum_i Z_i.
///
///   ising             g sum ZZ
///   sxsx              g sum XX
///   xyz               g (sum (cx XX + cy YY + cz ZZ) + cfield sum X)
///   ising_transverse  g (sum ZZ + b sum X)
///   ising_gradient    g (sum ZZ + b sum_k (X_k + 1e-5 k/N Z_k)),  k = 1..N
///   custom            the given matrix
struct HamiltonianSpec {
  HamiltonianKind kind = HamiltonianKind::kIsing;
  double g = 0.0;
  double omega = 0.0;
  double b = 0.0;
  double cx = 0.7;
  double cy = 0.3;
  double cz = 1.0;
  double cfield = 0.5;
  Matrix custom;
};

/// Linear map on vectorized n-qubit operators, a D^2 x D^2 matrix.
class Superoperator {
 public:
  Superoperator(int n_qubits, Matrix matrix);

  static Superoperator zero(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  /// Hilbert-space dimension D.
  Eigen::Index hilbert_dim() const noexcept { return Eigen::Index{1} << n_qubits_; }
  const Matrix& matrix() const noexcept { return matrix_; }

  Matrix apply(const Matrix& rho) const;

  /// max_k |(t Lambda)_k| with t the trace functional; zero for generators
  /// of trace-preserving evolution.
  double trace_defect() const;

  Superoperator& operator+=(const Superoperator& other);
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
  friend Superoperator operator*(double c, Superoperator a) {
    a.matrix_ *= c;
    return a;
  }

 private:
  int n_qubits_;
  Matrix matrix_;
};

Vector vec(const Matrix& rho);
Matrix unvec(const Vector& v);

/// Superoperator matrix of rho -> a rho b.
Matrix sandwich(const Matrix& a, const Matrix& b);

/// rate * (L rho L^dagger - {L^dagger L, rho} / 2).
Matrix dissipator(const Matrix& jump, double rate);

/// Builds the matrix of an arbitrary linear map column by column.
Superoperator superoperator_from_map(int n_qubits,
                                     const std::function<Matrix(const Matrix&)>& map);

QOperator build_hamiltonian(const HamiltonianSpec& spec, int n_qubits);

/// rho -> -i [H, rho].
Superoperator hamiltonian_generator(const QOperator& h);

Superoperator local_noise_generator(int n_qubits, const GasNoiseParams& params);

/// gamma sum_i (Z_i rho Z_i - rho).
Superoperator dephasing_generator(int n_qubits, double gamma);

/// r sum_i (rho_reset_i (x) tr_i rho - rho).
Superoperator reset_generator(int n_qubits, const ResetSpec& spec);

/// Coefficient matrix of the single-qubit reset term written as
/// sum_mn L_mn (2 s_m rho s_n - s_n s_m rho - rho s_n s_m) over Pauli s_1..s_3.
/// Positive semidefinite iff b1^2 + b2^2 + b3^2 <= 1/4.
Eigen::Matrix3cd lindblad_coefficient_matrix(double b1, double b2, double b3, double r);

/// The generator built from `coeffs` as above, acting on `site`.
Superoperator pauli_lindblad_generator(int n_qubits, int site, const Eigen::Matrix3cd& coeffs);

/// Minimum spacing between eigenvalues of H relative to its spectral radius
/// below which the thermal generator refuses to run.
inline constexpr double kDegeneracyTol = 1e-8;

/// Global thermal bath with constant spectral density. Population moves from
/// eigenstate a to b at rate 2 gamma sum_j [N_ba |<a|s-_j|b>|^2 (w_b > w_a)
/// + (N_ab + 1) |<b|s-_j|a>|^2 (w_a > w_b)], N_ab = 1 / (exp(beta (w_a - w_b)) - 1).
/// Throws std::invalid_argument for a degenerate H.
Superoperator thermal_generator(const QOperator& h, const ThermalBathParams& params);

/// exp(-beta H) / tr exp(-beta H).
DensityMatrix gibbs_state(const QOperator& h, double beta);

/// Lambda with vec(d rho / dt) = Lambda vec(rho), d rho / dt = -i [H, rho] + sum_k L_k rho.
Superoperator assemble(const QOperator& h, std::span<const Superoperator> generators);

enum class ModelKind {
  /// Local noise on every qubit.
  kGas,
  /// Global heat bath acting between eigenstates of H.
  kStronglyCoupled,
};

struct ModelSpec {
  ModelKind kind = ModelKind::kGas;
  int n_qubits = 2;
  HamiltonianSpec hamiltonian;
  GasNoiseParams noise;
  ThermalBathParams bath;
  ResetSpec reset;
};

/// H plus local noise or thermal bath plus reset.
Superoperator build_liouvillian(const ModelSpec& spec);

}  // namespace resetlb
