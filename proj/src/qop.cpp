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

#include "resetlb/qop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace resetlb {
namespace {

constexpr int kMaxQubits = 16;

// Bit of the basis index that carries qubit q.
std::uint64_t qubit_bit(int n_qubits, int q) {
  return std::uint64_t{1} << (n_qubits - 1 - q);
}

// Scatters the low bits of `compact` onto the positions listed in `bits`
// (most significant first).
std::uint64_t scatter(std::uint64_t compact, const std::vector<std::uint64_t>& bits) {
  std::uint64_t out = 0;
  const std::size_t k = bits.size();
  for (std::size_t i = 0; i < k; ++i) {
    if ((compact >> (k - 1 - i)) & 1U) out |= bits[i];
  }
  return out;
}

}  // namespace

int qubit_count(Eigen::Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if (n > kMaxQubits) throw std::invalid_argument("too many qubits");
  return n;
}

QOperator::QOperator(Matrix entries) : n_qubits_(0), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("operator matrix must be square");
  }
  n_qubits_ = qubit_count(entries_.rows());
}

QOperator QOperator::identity(int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return QOperator(Matrix::Identity(d, d));
}

Matrix2 pauli_matrix(Pauli which) {
  const cplx i{0.0, 1.0};
  Matrix2 m;
  switch (which) {
    case Pauli::kI:
      m << 1, 0, 0, 1;
      break;
    case Pauli::kX:
      m << 0, 1, 1, 0;
      break;
    case Pauli::kY:
      m << 0, -i, i, 0;
      break;
    case Pauli::kZ:
      m << 1, 0, 0, -1;
      break;
    case Pauli::kPlus:
      m << 0, 1, 0, 0;
      break;
    case Pauli::kMinus:
      m << 0, 0, 1, 0;
      break;
  }
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      auto blk = out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols());
      if (a(i, j) == cplx{}) {
        blk.setZero();
      } else {
        blk = a(i, j) * b;
      }
    }
  }
  return out;
}

Matrix embed(const Matrix2& op, int n_qubits, int site) {
  if (site < 0 || site >= n_qubits) {
    throw std::out_of_range("site " + std::to_string(site) + " outside [0, " +
                            std::to_string(n_qubits) + ")");
  }
  // Index-level construction; avoids chains of Kronecker products.
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const std::uint64_t bit = qubit_bit(n_qubits, site);
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int s_col = (static_cast<std::uint64_t>(col) & bit) ? 1 : 0;
    for (int s_row = 0; s_row < 2; ++s_row) {
      const cplx v = op(s_row, s_col);
      if (v == cplx{}) continue;
      const auto row = static_cast<Eigen::Index>(
          (static_cast<std::uint64_t>(col) & ~bit) | (s_row ? bit : 0));
      out(row, col) = v;
    }
  }
  return out;
}

QOperator local_pauli(int n_qubits, int site, Pauli which) {
  return QOperator(embed(pauli_matrix(which), n_qubits, site));
}

Bipartition::Bipartition(int n_qubits, std::vector<int> subset_a)
    : n_qubits_(n_qubits), subset_a_(std::move(subset_a)) {
  std::sort(subset_a_.begin(), subset_a_.end());
  subset_a_.erase(std::unique(subset_a_.begin(), subset_a_.end()), subset_a_.end());
  if (subset_a_.empty() || static_cast<int>(subset_a_.size()) >= n_qubits) {
    throw std::invalid_argument("bipartition subset must be non-empty and proper");
  }
  for (int q : subset_a_) {
    if (q < 0 || q >= n_qubits) throw std::out_of_range("bipartition qubit out of range");
    index_mask_ |= qubit_bit(n_qubits, q);
  }
}

std::vector<int> Bipartition::complement() const {
  std::vector<int> out;
  for (int q = 0; q < n_qubits_; ++q) {
    if (!contains(q)) out.push_back(q);
  }
  return out;
}

bool Bipartition::contains(int qubit) const {
  return std::binary_search(subset_a_.begin(), subset_a_.end(), qubit);
}

std::string Bipartition::to_string() const {
  std::ostringstream os;
  auto put = [&os](const std::vector<int>& qs) {
    os << '{';
    for (std::size_t i = 0; i < qs.size(); ++i) os << (i ? "," : "") << qs[i];
    os << '}';
  };
  put(subset_a_);
  os << '|';
  put(complement());
  return os.str();
}

std::string DensityCheck::describe() const {
  std::ostringstream os;
  switch (kind) {
    case DensityViolation::kShape:
      os << "matrix is not square with power-of-two dimension";
      break;
    case DensityViolation::kNonFinite:
      os << "matrix has non-finite entries";
      break;
    case DensityViolation::kNonHermitian:
      os << "not Hermitian: max|rho - rho^dagger| = " << amount;
      break;
    case DensityViolation::kTrace:
      os << "trace differs from 1 by " << amount;
      break;
    case DensityViolation::kNegativeEigenvalue:
      os << "negative eigenvalue of magnitude " << amount;
      break;
  }
  return os.str();
}

DensityError::DensityError(DensityCheck check)
    : Error("invalid density matrix: " + check.describe()), check_(check) {}

std::optional<DensityCheck> check_density(const Matrix& m, double tol) {
  const Eigen::Index d = m.rows();
  if (d != m.cols() || d < 1 || (d & (d - 1)) != 0) {
    return DensityCheck{DensityViolation::kShape, 0.0};
  }
  if (!m.allFinite()) return DensityCheck{DensityViolation::kNonFinite, 0.0};
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) return DensityCheck{DensityViolation::kNonHermitian, herm};
  const double trace_dev = std::abs(m.trace() - cplx{1.0, 0.0});
  if (trace_dev > tol) return DensityCheck{DensityViolation::kTrace, trace_dev};
  const Matrix h = 0.5 * (m + m.adjoint());
  const double min_eig = hermitian_eigenvalues(h).minCoeff();
  if (min_eig < -tol) return DensityCheck{DensityViolation::kNegativeEigenvalue, -min_eig};
  return std::nullopt;
}

DensityMatrix validate_density(const Matrix& m, double tol) {
  if (auto bad = check_density(m, tol)) throw DensityError(*bad);
  return DensityMatrix(QOperator(0.5 * (m + m.adjoint())), tol);
}

DensityMatrix pure_state(const Vector& ket) {
  const double norm = ket.norm();
  if (norm == 0.0) throw std::invalid_argument("zero state vector");
  const Vector v = ket / norm;
  return validate_density(v * v.adjoint());
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return validate_density(kron(a.matrix(), b.matrix()), std::max(a.tol(), b.tol()));
}

Matrix partial_trace(const Matrix& m, std::span<const int> keep) {
  const int n = qubit_count(m.rows());
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (kept.empty()) throw std::invalid_argument("partial trace needs a non-empty keep set");
  if (kept.front() < 0 || kept.back() >= n) throw std::out_of_range("keep qubit out of range");
  std::vector<std::uint64_t> keep_bits;
  std::vector<std::uint64_t> trace_bits;
  for (int q = 0; q < n; ++q) {
    const bool k = std::binary_search(kept.begin(), kept.end(), q);
    (k ? keep_bits : trace_bits).push_back(qubit_bit(n, q));
  }

  const std::uint64_t dk = std::uint64_t{1} << keep_bits.size();
  const std::uint64_t dt = std::uint64_t{1} << trace_bits.size();
  std::vector<std::uint64_t> env(dt);
  for (std::uint64_t t = 0; t < dt; ++t) env[t] = scatter(t, trace_bits);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::uint64_t j = 0; j < dk; ++j) {
    const std::uint64_t col = scatter(j, keep_bits);
    for (std::uint64_t i = 0; i < dk; ++i) {
      const std::uint64_t row = scatter(i, keep_bits);
      cplx acc{};
      for (std::uint64_t e : env) {
        acc += m(static_cast<Eigen::Index>(row | e), static_cast<Eigen::Index>(col | e));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  return validate_density(partial_trace(rho.matrix(), keep), rho.tol());
}

Matrix partial_transpose(const Matrix& m, const Bipartition& part) {
  if (qubit_count(m.rows()) != part.n_qubits() || m.rows() != m.cols()) {
    throw std::invalid_argument("bipartition does not match operator size");
  }
  const std::uint64_t a = part.index_mask();
  const Eigen::Index d = m.rows();
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto uj = static_cast<std::uint64_t>(j);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto ui = static_cast<std::uint64_t>(i);
      const auto ni = static_cast<Eigen::Index>((ui & ~a) | (uj & a));
      const auto nj = static_cast<Eigen::Index>((uj & ~a) | (ui & a));
      out(ni, nj) = m(i, j);
    }
  }
  return out;
}

QOperator partial_transpose(const DensityMatrix& rho, const Bipartition& part) {
  return QOperator(partial_transpose(rho.matrix(), part));
}

double trace_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("trace norm needs a square matrix");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("Hermitian eigensolver failed");
  return es.eigenvalues();
}

}  // namespace resetlb
