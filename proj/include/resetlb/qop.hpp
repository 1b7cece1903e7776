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

// Dense operator algebra on n-qubit Hilbert spaces.
//
// Qubit 0 is the leftmost tensor factor: the basis state |s_0 s_1 ... s_{n-1}>
// has row index sum_k s_k 2^{n-1-k}. Pauli Z is diag(1, -1), so |0> is the
// +1 eigenstate, and sigma_+ = |0><1| raises |1> to |0>.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resetlb/errors.hpp"

namespace resetlb {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

/// Absolute tolerance used when validating density matrices.
inline constexpr double kDefaultTol = 1e-9;

/// Returns n such that dim == 2^n; throws std::invalid_argument otherwise.
int qubit_count(Eigen::Index dim);

/// Square complex matrix acting on n qubits.
class QOperator {
 public:
  explicit QOperator(Matrix entries);

  static QOperator identity(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  int n_qubits_;
  Matrix entries_;
};

enum class Pauli { kI, kX, kY, kZ, kPlus, kMinus };

Matrix2 pauli_matrix(Pauli which);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// I (x) ... (x) op (x) ... (x) I with op at position `site`.
Matrix embed(const Matrix2& op, int n_qubits, int site);

QOperator local_pauli(int n_qubits, int site, Pauli which);

/// A cut of the qubit set into A and its complement. A is non-empty and proper.
class Bipartition {
 public:
  Bipartition(int n_qubits, std::vector<int> subset_a);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<int>& subset_a() const noexcept { return subset_a_; }
  std::vector<int> complement() const;
  bool contains(int qubit) const;
  /// Bits of the basis index that belong to A.
  std::uint64_t index_mask() const noexcept { return index_mask_; }
  Bipartition swapped() const { return Bipartition(n_qubits_, complement()); }
  std::string to_string() const;

 private:
  int n_qubits_;
  std::vector<int> subset_a_;
  std::uint64_t index_mask_ = 0;
};

enum class DensityViolation {
  kShape,
  kNonFinite,
  kNonHermitian,
  kTrace,
  kNegativeEigenvalue,
};

struct DensityCheck {
  DensityViolation kind;
  /// How far the offending quantity is from its allowed range.
  double amount;

  std::string describe() const;
};

class DensityError : public Error {
 public:
  explicit DensityError(DensityCheck check);
  const DensityCheck& check() const noexcept { return check_; }

 private:
  DensityCheck check_;
};

/// Returns the first violated invariant, or nothing for a valid density matrix.
std::optional<DensityCheck> check_density(const Matrix& m, double tol = kDefaultTol);

/// Hermitian, unit-trace, positive semidefinite operator. Only obtainable
/// through validation; the stored matrix is exactly Hermitian.
class DensityMatrix {
 public:
  const QOperator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  int n_qubits() const noexcept { return op_.n_qubits(); }
  Eigen::Index dim() const noexcept { return op_.dim(); }
  double tol() const noexcept { return tol_; }

 private:
  DensityMatrix(QOperator op, double tol) : op_(std::move(op)), tol_(tol) {}
  friend DensityMatrix validate_density(const Matrix& m, double tol);

  QOperator op_;
  double tol_;
};

/// Throws DensityError naming the violated invariant and by how much.
DensityMatrix validate_density(const Matrix& m, double tol = kDefaultTol);

/// |psi><psi| for a (not necessarily normalized) state vector.
DensityMatrix pure_state(const Vector& ket);

/// rho_a (x) rho_b.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced operator on the qubits in `keep` (in ascending order).
Matrix partial_trace(const Matrix& m, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Transpose of the A factor only.
Matrix partial_transpose(const Matrix& m, const Bipartition& part);
QOperator partial_transpose(const DensityMatrix& rho, const Bipartition& part);

/// Sum of singular values.
double trace_norm(const Matrix& m);

/// Ascending eigenvalues of a Hermitian matrix (lower triangle is read).
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

}  // namespace resetlb
