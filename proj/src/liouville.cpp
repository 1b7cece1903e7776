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

#include "resetlb/liouville.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace resetlb {
namespace {

constexpr double kBlochSlack = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

Matrix pauli_on(int n, int site, Pauli p) { return embed(pauli_matrix(p), n, site); }

Matrix pair_term(int n, Pauli p) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const Matrix pi = pauli_on(n, i, p);
    for (int j = i + 1; j < n; ++j) out += pi * pauli_on(n, j, p);
  }
  return out;
}

Matrix field_term(int n, Pauli p) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i) out += pauli_on(n, i, p);
  return out;
}

}  // namespace

void GasNoiseParams::validate() const {
  require(std::isfinite(B) && std::isfinite(C) && std::isfinite(s), "noise parameters must be finite");
  require(B >= 0.0, "noise: B must be non-negative");
  require(2.0 * C >= B, "noise: 2C must be at least B");
  require(s >= 0.0 && s <= 1.0, "noise: s must lie in [0, 1]");
}

void ThermalBathParams::validate() const {
  require(std::isfinite(gamma) && gamma >= 0.0, "bath: gamma must be non-negative");
  require(std::isfinite(beta) && beta > 0.0, "bath: beta must be positive");
}

Matrix2 bloch_state(double b1, double b2, double b3) {
  require(b1 * b1 + b2 * b2 + b3 * b3 <= 0.25 + kBlochSlack, "Bloch vector longer than 1/2");
  return 0.5 * pauli_matrix(Pauli::kI) + b1 * pauli_matrix(Pauli::kX) +
         b2 * pauli_matrix(Pauli::kY) + b3 * pauli_matrix(Pauli::kZ);
}

std::array<double, 3> bloch_components(const Matrix2& rho) {
  return {0.5 * (rho * pauli_matrix(Pauli::kX)).trace().real(),
          0.5 * (rho * pauli_matrix(Pauli::kY)).trace().real(),
          0.5 * (rho * pauli_matrix(Pauli::kZ)).trace().real()};
}

Matrix2 mixed_state(double purity, const Eigen::Vector2cd& ket) {
  require(purity >= 0.0 && purity <= 1.0, "purity must lie in [0, 1]");
  const double norm = ket.norm();
  require(norm > 0.0, "zero reset ket");
  const Eigen::Vector2cd v = ket / norm;
  return purity * (v * v.adjoint()) + 0.5 * (1.0 - purity) * Matrix2::Identity();
}

double purity_parameter(const Matrix2& rho) {
  const auto b = bloch_components(rho);
  return 2.0 * std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
}

ResetSpec ResetSpec::uniform(double r, const Matrix2& state, int n_qubits) {
  return ResetSpec{r, std::vector<Matrix2>(static_cast<std::size_t>(n_qubits), state)};
}

void ResetSpec::validate(int n_qubits) const {
  require(std::isfinite(r) && r >= 0.0, "reset rate must be non-negative");
  require(static_cast<int>(states.size()) == n_qubits,
          "reset needs one state per qubit (" + std::to_string(n_qubits) + ")");
  for (const Matrix2& st : states) {
    if (auto bad = check_density(st)) {
      throw std::invalid_argument("invalid reset state: " + bad->describe());
    }
  }
}

std::optional<HamiltonianKind> parse_hamiltonian_kind(std::string_view name) {
  if (name == "ising") return HamiltonianKind::kIsing;
  if (name == "sxsx") return HamiltonianKind::kSxSx;
  if (name == "xyz") return HamiltonianKind::kXYZ;
  if (name == "ising_transverse") return HamiltonianKind::kIsingTransverse;
  if (name == "ising_gradient") return HamiltonianKind::kIsingGradient;
  if (name == "custom") return HamiltonianKind::kCustom;
  return std::nullopt;
}

std::string_view hamiltonian_kind_name(HamiltonianKind kind) {
  switch (kind) {
    case HamiltonianKind::kIsing:
      return "ising";
    case HamiltonianKind::kSxSx:
      return "sxsx";
    case HamiltonianKind::kXYZ:
      return "xyz";
    case HamiltonianKind::kIsingTransverse:
      return "ising_transverse";
    case HamiltonianKind::kIsingGradient:
      return "ising_gradient";
    case HamiltonianKind::kCustom:
      return "custom";
  }
  return "unknown";
}

Superoperator::Superoperator(int n_qubits, Matrix matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  const Eigen::Index d2 = hilbert_dim() * hilbert_dim();
  if (matrix_.rows() != d2 || matrix_.cols() != d2) {
    throw std::invalid_argument("superoperator size does not match qubit count");
  }
}

Superoperator Superoperator::zero(int n_qubits) {
  const Eigen::Index d2 = Eigen::Index{1} << (2 * n_qubits);
  return Superoperator(n_qubits, Matrix::Zero(d2, d2));
}

Matrix Superoperator::apply(const Matrix& rho) const {
  if (rho.rows() != hilbert_dim() || rho.cols() != hilbert_dim()) {
    throw std::invalid_argument("operator size does not match superoperator");
  }
  return unvec(matrix_ * vec(rho));
}

double Superoperator::trace_defect() const {
  const Eigen::Index d = hilbert_dim();
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) t(i * (d + 1)) = 1.0;
  return (t * matrix_).cwiseAbs().maxCoeff();
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("superoperator size mismatch");
  matrix_ += other.matrix_;
  return *this;
}

Vector vec(const Matrix& rho) { return Eigen::Map<const Vector>(rho.data(), rho.size()); }

Matrix unvec(const Vector& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw std::invalid_argument("vector length is not a square");
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix sandwich(const Matrix& a, const Matrix& b) { return kron(b.transpose(), a); }

Matrix dissipator(const Matrix& jump, double rate) {
  const Eigen::Index d = jump.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix ldl = jump.adjoint() * jump;
  return rate * (kron(jump.conjugate(), jump) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
}

Superoperator superoperator_from_map(int n_qubits,
                                     const std::function<Matrix(const Matrix&)>& map) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  Matrix out(d * d, d * d);
  Matrix basis = Matrix::Zero(d, d);
  for (Eigen::Index l = 0; l < d; ++l) {
    for (Eigen::Index k = 0; k < d; ++k) {
      basis(k, l) = 1.0;
      out.col(k + d * l) = vec(map(basis));
      basis(k, l) = 0.0;
    }
  }
  return Superoperator(n_qubits, std::move(out));
}

QOperator build_hamiltonian(const HamiltonianSpec& spec, int n_qubits) {
  require(n_qubits >= 1, "Hamiltonian needs at least one qubit");
  const bool pairwise = spec.kind != HamiltonianKind::kCustom;
  require(!pairwise || n_qubits >= 2,
          std::string(hamiltonian_kind_name(spec.kind)) + " needs at least two qubits");
  const int n = n_qubits;
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix h;
  switch (spec.kind) {
    case HamiltonianKind::kIsing:
      h = spec.g * pair_term(n, Pauli::kZ);
      break;
    case HamiltonianKind::kSxSx:
      h = spec.g * pair_term(n, Pauli::kX);
      break;
    case HamiltonianKind::kXYZ:
      h = spec.g * (spec.cx * pair_term(n, Pauli::kX) + spec.cy * pair_term(n, Pauli::kY) +
                    spec.cz * pair_term(n, Pauli::kZ) + spec.cfield * field_term(n, Pauli::kX));
      break;
    case HamiltonianKind::kIsingTransverse:
      h = spec.g * (pair_term(n, Pauli::kZ) + spec.b * field_term(n, Pauli::kX));
      break;
    case HamiltonianKind::kIsingGradient: {
      Matrix field = Matrix::Zero(d, d);
      for (int k = 1; k <= n; ++k) {
        field += pauli_on(n, k - 1, Pauli::kX) +
                 (1e-5 * k / n) * pauli_on(n, k - 1, Pauli::kZ);
      }
      h = spec.g * (pair_term(n, Pauli::kZ) + spec.b * field);
      break;
    }
    case HamiltonianKind::kCustom:
      require(spec.custom.rows() == d && spec.custom.cols() == d,
              "custom Hamiltonian has the wrong size");
      require((spec.custom - spec.custom.adjoint()).cwiseAbs().maxCoeff() <= 1e-12,
              "custom Hamiltonian is not Hermitian");
      return QOperator(0.5 * (spec.custom + spec.custom.adjoint()));
  }
  h += 0.5 * spec.omega * field_term(n, Pauli::kZ);
  return QOperator(std::move(h));
}

Superoperator hamiltonian_generator(const QOperator& h) {
  const Eigen::Index d = h.dim();
  const Matrix id = Matrix::Identity(d, d);
  const cplx minus_i{0.0, -1.0};
  return Superoperator(h.n_qubits(),
                       minus_i * (kron(id, h.matrix()) - kron(h.matrix().transpose(), id)));
}

Superoperator local_noise_generator(int n_qubits, const GasNoiseParams& params) {
  params.validate();
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const Matrix id2 = Matrix::Identity(d * d, d * d);
  const double zeta = 0.25 * (2.0 * params.C - params.B);
  Matrix out = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < n_qubits; ++i) {
    if (params.B * (1.0 - params.s) != 0.0) {
      out += dissipator(pauli_on(n_qubits, i, Pauli::kMinus), params.B * (1.0 - params.s));
    }
    if (params.B * params.s != 0.0) {
      out += dissipator(pauli_on(n_qubits, i, Pauli::kPlus), params.B * params.s);
    }
    if (zeta != 0.0) {
      const Matrix z = pauli_on(n_qubits, i, Pauli::kZ);
      out += zeta * (sandwich(z, z) - id2);
    }
  }
  return Superoperator(n_qubits, std::move(out));
}

Superoperator dephasing_generator(int n_qubits, double gamma) {
  require(std::isfinite(gamma) && gamma >= 0.0, "dephasing rate must be non-negative");
  // Z_i rho Z_i is diagonal in the vectorized basis: sign (-1)^(x_i + y_i).
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  Matrix out = Matrix::Zero(d * d, d * d);
  for (Eigen::Index y = 0; y < d; ++y) {
    for (Eigen::Index x = 0; x < d; ++x) {
      const auto differing = static_cast<std::uint64_t>(x ^ y);
      const int flips = std::popcount(differing);
      out(x + d * y, x + d * y) = -2.0 * gamma * flips;
    }
  }
  return Superoperator(n_qubits, std::move(out));
}

Superoperator reset_generator(int n_qubits, const ResetSpec& spec) {
  spec.validate(n_qubits);
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  Matrix out = Matrix::Zero(d * d, d * d);
  if (spec.r == 0.0) return Superoperator(n_qubits, std::move(out));
  for (int i = 0; i < n_qubits; ++i) {
    const auto bit = static_cast<Eigen::Index>(std::uint64_t{1} << (n_qubits - 1 - i));
    const Matrix2& st = spec.states[static_cast<std::size_t>(i)];
    // (sigma (x) tr_i rho)(x, y) = sigma(x_i, y_i) sum_m rho(x|i=m, y|i=m).
    for (Eigen::Index y = 0; y < d; ++y) {
      const int yi = (y & bit) ? 1 : 0;
      for (Eigen::Index x = 0; x < d; ++x) {
        const int xi = (x & bit) ? 1 : 0;
        const cplx coeff = spec.r * st(xi, yi);
        if (coeff == cplx{}) continue;
        for (int m = 0; m < 2; ++m) {
          const Eigen::Index xs = (x & ~bit) | (m ? bit : 0);
          const Eigen::Index ys = (y & ~bit) | (m ? bit : 0);
          out(x + d * y, xs + d * ys) += coeff;
        }
      }
    }
  }
  out.diagonal().array() -= spec.r * n_qubits;
  return Superoperator(n_qubits, std::move(out));
}

Eigen::Matrix3cd lindblad_coefficient_matrix(double b1, double b2, double b3, double r) {
  const cplx i{0.0, 1.0};
  Eigen::Matrix3cd m;
  m << 1.0 / 8.0, -i * b3 / 4.0, i * b2 / 4.0,
       i * b3 / 4.0, 1.0 / 8.0, -i * b1 / 4.0,
       -i * b2 / 4.0, i * b1 / 4.0, 1.0 / 8.0;
  return r * m;
}

Superoperator pauli_lindblad_generator(int n_qubits, int site, const Eigen::Matrix3cd& coeffs) {
  const std::array<Matrix, 3> s = {pauli_on(n_qubits, site, Pauli::kX),
                                   pauli_on(n_qubits, site, Pauli::kY),
                                   pauli_on(n_qubits, site, Pauli::kZ)};
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const Matrix id = Matrix::Identity(d, d);
  Matrix out = Matrix::Zero(d * d, d * d);
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      const cplx c = coeffs(m, n);
      if (c == cplx{}) continue;
      const Matrix nm = s[n] * s[m];
      out += c * (2.0 * sandwich(s[m], s[n]) - kron(id, nm) - kron(nm.transpose(), id));
    }
  }
  return Superoperator(n_qubits, std::move(out));
}

Superoperator thermal_generator(const QOperator& h, const ThermalBathParams& params) {
  params.validate();
  const int n = h.n_qubits();
  const Eigen::Index d = h.dim();
  if (params.gamma == 0.0) return Superoperator::zero(n);

  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw SolverError("Hamiltonian eigensolver failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  const Matrix& v = es.eigenvectors();

  const double radius = std::max(std::abs(w(0)), std::abs(w(d - 1)));
  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 1; a < d; ++a) min_gap = std::min(min_gap, w(a) - w(a - 1));
  if (d > 1 && min_gap <= kDegeneracyTol * radius) {
    throw std::invalid_argument("thermal bath needs a nondegenerate Hamiltonian (minimum gap " +
                                std::to_string(min_gap) + ")");
  }

  // rate(a, b): population transfer from eigenstate a to eigenstate b.
  Eigen::MatrixXd rate = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < n; ++j) {
    const Matrix sm = v.adjoint() * pauli_on(n, j, Pauli::kMinus) * v;
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        if (a == b) continue;
        if (w(b) > w(a)) {
          const double occ = 1.0 / std::expm1(params.beta * (w(b) - w(a)));
          rate(a, b) += occ * std::norm(sm(a, b));
        } else {
          const double occ = 1.0 / std::expm1(params.beta * (w(a) - w(b)));
          rate(a, b) += (occ + 1.0) * std::norm(sm(b, a));
        }
      }
    }
  }
  rate *= 2.0 * params.gamma;
  const Eigen::VectorXd out_rate = rate.rowwise().sum();

  auto eigenbasis_action = [&](const Matrix& x) {
    Matrix y(d, d);
    for (Eigen::Index q = 0; q < d; ++q) {
      for (Eigen::Index p = 0; p < d; ++p) y(p, q) = -0.5 * (out_rate(p) + out_rate(q)) * x(p, q);
    }
    for (Eigen::Index b = 0; b < d; ++b) {
      cplx gain{};
      for (Eigen::Index a = 0; a < d; ++a) gain += rate(a, b) * x(a, a);
      y(b, b) += gain;
    }
    return y;
  };

  const Matrix vh = v.adjoint();
  return superoperator_from_map(n, [&](const Matrix& e) {
    return Matrix(v * eigenbasis_action(vh * e * v) * vh);
  });
}

DensityMatrix gibbs_state(const QOperator& h, double beta) {
  require(std::isfinite(beta) && beta >= 0.0, "beta must be non-negative");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw SolverError("Hamiltonian eigensolver failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  const Eigen::VectorXd boltz = (-beta * (w.array() - w.minCoeff())).exp();
  const Matrix rho = es.eigenvectors() * (boltz / boltz.sum()).cast<cplx>().asDiagonal() *
                     es.eigenvectors().adjoint();
  return validate_density(rho);
}

Superoperator assemble(const QOperator& h, std::span<const Superoperator> generators) {
  Superoperator total = hamiltonian_generator(h);
  for (const Superoperator& g : generators) {
    if (g.n_qubits() != h.n_qubits()) {
      throw std::invalid_argument("generator acts on " + std::to_string(g.n_qubits()) +
                                  " qubits, Hamiltonian on " + std::to_string(h.n_qubits()));
    }
    total += g;
  }
  return total;
}

Superoperator build_liouvillian(const ModelSpec& spec) {
  const QOperator h = build_hamiltonian(spec.hamiltonian, spec.n_qubits);
  std::vector<Superoperator> parts;
  if (spec.kind == ModelKind::kGas) {
    parts.push_back(local_noise_generator(spec.n_qubits, spec.noise));
  } else {
    parts.push_back(thermal_generator(h, spec.bath));
  }
  parts.push_back(reset_generator(spec.n_qubits, spec.reset));
  return assemble(h, parts);
}

}  // namespace resetlb
