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

// Independent reference implementations for cross-checks, used by the tests
// and the verify command. None of these share code paths with the library
// beyond the basic matrix types.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "resetlb/qop.hpp"

namespace resetlb::oracle {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(n(rng), n(rng));
  }
  return m;
}

/// Full-rank random density matrix.
inline Matrix random_density(std::mt19937_64& rng, Eigen::Index dim) {
  const Matrix a = random_matrix(rng, dim, dim);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline Vector random_ket(std::mt19937_64& rng, Eigen::Index dim) {
  Vector v = random_matrix(rng, dim, 1).col(0);
  return v / v.norm();
}

inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, dim, dim));
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

/// Bit of qubit q (qubit 0 leftmost) in the basis index of an n-qubit state.
inline int bit_of(Eigen::Index index, int n, int q) { return static_cast<int>((index >> (n - 1 - q)) & 1); }

/// Partial trace by explicit summation over all index pairs.
inline Matrix partial_trace_loop(const Matrix& rho, int n, const std::vector<int>& keep) {
  const Eigen::Index d = rho.rows();
  const int k = static_cast<int>(keep.size());
  Matrix out = Matrix::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      bool traced_equal = true;
      for (int q = 0; q < n && traced_equal; ++q) {
        bool kept = false;
        for (int kq : keep) kept = kept || (kq == q);
        if (!kept && bit_of(i, n, q) != bit_of(j, n, q)) traced_equal = false;
      }
      if (!traced_equal) continue;
      Eigen::Index a = 0;
      Eigen::Index b = 0;
      for (int kq : keep) {
        a = 2 * a + bit_of(i, n, kq);
        b = 2 * b + bit_of(j, n, kq);
      }
      out(a, b) += rho(i, j);
    }
  }
  return out;
}

/// sum of sqrt(eigenvalues of M^dagger M).
inline double trace_norm_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m);
  double s = 0.0;
  for (double e : es.eigenvalues()) s += std::sqrt(std::max(0.0, e));
  return s;
}

/// Negativity from the trace norm of the partial transpose, with the
/// transpose done by explicit index swapping on the qubits listed in `a`.
inline double negativity_trace_norm(const Matrix& rho, int n, const std::vector<int>& a) {
  const Eigen::Index d = rho.rows();
  Matrix pt(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Eigen::Index ni = i;
      Eigen::Index nj = j;
      for (int q : a) {
        const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
        const Eigen::Index bi = i & bit;
        const Eigen::Index bj = j & bit;
        ni = (ni & ~bit) | bj;
        nj = (nj & ~bit) | bi;
      }
      pt(ni, nj) = rho(i, j);
    }
  }
  return 0.5 * (trace_norm_sqrt(pt) - 1.0);
}

/// Single-site operator on n qubits, built by repeated Kronecker products.
inline Matrix site_op(const Eigen::Matrix2cd& op, int n, int site) {
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    const Matrix f = (q == site) ? Matrix(op) : Matrix(Matrix::Identity(2, 2));
    Matrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
    }
    out = next;
  }
  return out;
}

inline Eigen::Matrix2cd sx() { return (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(); }
inline Eigen::Matrix2cd sy() {
  return (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
}
inline Eigen::Matrix2cd sz() { return (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(); }
inline Eigen::Matrix2cd sminus() { return (Eigen::Matrix2cd() << 0, 0, 1, 0).finished(); }
inline Eigen::Matrix2cd splus() { return (Eigen::Matrix2cd() << 0, 1, 0, 0).finished(); }

/// D[L] rho = L rho L^dagger - {L^dagger L, rho} / 2, applied directly.
inline Matrix apply_dissipator(const Matrix& l, const Matrix& rho) {
  const Matrix ldl = l.adjoint() * l;
  return l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

/// Right-hand side of the gas-type master equation with reset, evaluated on
/// a matrix without any vectorization.
inline Matrix gas_rhs(const Matrix& h, double B, double C, double s, double r,
                      const std::vector<Eigen::Matrix2cd>& reset, const Matrix& rho, int n) {
  const cplx i(0, 1);
  Matrix out = -i * (h * rho - rho * h);
  for (int q = 0; q < n; ++q) {
    out += B * (1 - s) * apply_dissipator(site_op(sminus(), n, q), rho);
    out += B * s * apply_dissipator(site_op(splus(), n, q), rho);
    const Matrix z = site_op(sz(), n, q);
    out += (2 * C - B) / 4 * (z * rho * z - rho);
    if (r != 0) {
      std::vector<int> rest;
      for (int k = 0; k < n; ++k) {
        if (k != q) rest.push_back(k);
      }
      // reset_q (x) tr_q rho, then move the reset factor into position q.
      const Matrix red = rest.empty() ? Matrix::Identity(1, 1) * rho.trace()
                                      : partial_trace_loop(rho, n, rest);
      const Eigen::Index d = rho.rows();
      Matrix placed(d, d);
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          Eigen::Index ra = 0;
          Eigen::Index rb = 0;
          for (int k : rest) {
            ra = 2 * ra + bit_of(a, n, k);
            rb = 2 * rb + bit_of(b, n, k);
          }
          placed(a, b) = reset[static_cast<std::size_t>(q)](bit_of(a, n, q), bit_of(b, n, q)) * red(ra, rb);
        }
      }
      out += r * (placed - rho);
    }
  }
  return out;
}

/// Amplitudes 2^{-N/2} exp(i sum_{i<j} phi_ij s_i s_j) of a weighted graph state.
inline Vector weighted_graph_state(const Eigen::MatrixXd& phases) {
  const int n = static_cast<int>(phases.rows());
  const Eigen::Index d = Eigen::Index{1} << n;
  Vector psi(d);
  for (Eigen::Index x = 0; x < d; ++x) {
    double theta = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (bit_of(x, n, a) && bit_of(x, n, b)) theta += phases(a, b);
      }
    }
    psi(x) = std::polar(std::pow(2.0, -0.5 * n), theta);
  }
  return psi;
}

}  // namespace resetlb::oracle
