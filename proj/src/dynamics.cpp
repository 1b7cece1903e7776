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

#include "resetlb/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "resetlb/entanglement.hpp"

namespace resetlb {
namespace {

constexpr int kMaxHalvings = 20;
constexpr int kMaxInverseIterations = 200;
constexpr double kSteadyTol = 1e-9;

struct Propagator {
  Matrix p;
  double error;
};

// exp(Lambda h) built from 2^k substeps, with k the smallest count for which
// one substep and two half substeps agree to kEvolveTol.
Propagator make_propagator(const Matrix& lambda, double h) {
  for (int k = 0; k < kMaxHalvings; ++k) {
    const double sub = std::ldexp(h, -k);
    Matrix p = (lambda * sub).exp();
    const Matrix half = (lambda * (0.5 * sub)).exp();
    const double err = (p - half * half).cwiseAbs().maxCoeff();
    if (err <= kEvolveTol) {
      for (int j = 0; j < k; ++j) p = p * p;
      return {std::move(p), err};
    }
  }
  throw SolverError("matrix exponential did not reach the step error bound");
}

double spectral_radius_bound(const Matrix& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

DensityMatrix finish_steady(const Matrix& lambda, const Vector& null_vec) {
  Matrix rho = unvec(null_vec);
  // Remove the arbitrary complex phase before Hermitizing; otherwise a
  // phase near +-i cancels most of the state.
  const cplx tr = rho.trace();
  if (std::abs(tr) <= 1e-12 * rho.norm()) throw SolverError("steady-state null vector is traceless");
  rho /= tr;
  rho = (0.5 * (rho + rho.adjoint())).eval();
  rho /= rho.trace().real();
  const double residual = (lambda * vec(rho)).norm();
  if (residual > kSteadyTol) {
    std::ostringstream os;
    os << "steady-state residual " << residual << " exceeds " << kSteadyTol;
    throw SolverError(os.str());
  }
  if (auto bad = check_density(rho, kSteadyTol)) {
    throw SolverError("steady state is not a valid density matrix: " + bad->describe());
  }
  return validate_density(rho, kSteadyTol);
}

Vector inverse_polish(const Eigen::PartialPivLU<Matrix>& lu, Vector x, int steps) {
  for (int i = 0; i < steps; ++i) {
    x = lu.solve(x);
    x /= x.norm();
  }
  return x;
}

void throw_null_count(int count, double tol) {
  std::ostringstream os;
  if (count == 0) {
    os << "no eigenvalue within " << tol << " of zero";
  } else {
    os << count << " eigenvalues within " << tol << " of zero: steady state is not unique";
  }
  throw SolverError(os.str());
}

}  // namespace

EvolutionResult evolve(const Superoperator& lambda, const DensityMatrix& rho0,
                       const std::vector<double>& times) {
  if (rho0.n_qubits() != lambda.n_qubits()) {
    throw std::invalid_argument("initial state does not match the Liouvillian size");
  }
  if (!lambda.matrix().allFinite()) throw std::invalid_argument("Liouvillian has non-finite entries");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i]) || (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument("time grid must be finite, non-negative and non-decreasing");
    }
  }

  EvolutionResult result;
  result.times = times;
  std::map<double, Propagator> cache;
  Vector v = vec(rho0.matrix());
  double t_now = 0.0;
  for (double t : times) {
    const double h = t - t_now;
    if (h > 0.0) {
      auto it = cache.find(h);
      if (it == cache.end()) it = cache.emplace(h, make_propagator(lambda.matrix(), h)).first;
      v = it->second.p * v;
      result.error_estimate = std::max(result.error_estimate, it->second.error);
      ++result.steps;
      t_now = t;
    }
    Matrix rho = unvec(v);
    if (auto bad = check_density(rho, kEvolvedStateTol)) {
      std::ostringstream os;
      os << "evolved state at t = " << t << " is invalid: " << bad->describe();
      throw SolverError(os.str());
    }
    result.states.push_back(validate_density(rho, kEvolvedStateTol));
  }
  return result;
}

DensityMatrix steady_state(const Superoperator& lambda) {
  const Matrix& m = lambda.matrix();
  const Eigen::Index n = m.rows();
  if (!m.allFinite()) throw SolverError("Liouvillian has non-finite entries");
  const double norm_bound = spectral_radius_bound(m);
  if (norm_bound == 0.0) throw_null_count(static_cast<int>(n), 0.0);
  const double shift = 1e-6 * norm_bound;
  const Eigen::PartialPivLU<Matrix> lu(m - shift * Matrix::Identity(n, n));

  if (n <= kDenseSteadyLimit) {
    Eigen::ComplexEigenSolver<Matrix> es(m, true);
    if (es.info() != Eigen::Success) throw SolverError("Liouvillian eigensolver failed");
    const Vector& ev = es.eigenvalues();
    const double tol = kNullTol * ev.cwiseAbs().maxCoeff();
    int count = 0;
    Eigen::Index best = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) <= tol) ++count;
      if (std::abs(ev(i)) < std::abs(ev(best))) best = i;
    }
    if (count != 1) throw_null_count(count, tol);
    Vector x = es.eigenvectors().col(best);
    return finish_steady(m, inverse_polish(lu, x / x.norm(), 2));
  }

  // Subspace inverse iteration with two vectors; the second Ritz value
  // certifies that the null space is one-dimensional.
  Matrix q(n, 2);
  q.col(0) = vec(Matrix::Identity(lambda.hilbert_dim(), lambda.hilbert_dim()));
  q.col(1) = Vector::LinSpaced(n, 1.0, 2.0);
  Eigen::HouseholderQR<Matrix> qr(q);
  q = qr.householderQ() * Matrix::Identity(n, 2);
  Eigen::Vector2cd ritz;
  Matrix ritz_vecs;
  const double tol = kNullTol * norm_bound;
  for (int it = 0; it < kMaxInverseIterations; ++it) {
    qr.compute(lu.solve(q));
    q = qr.householderQ() * Matrix::Identity(n, 2);
    const Matrix small = q.adjoint() * m * q;
    Eigen::ComplexEigenSolver<Matrix> es(small, true);
    ritz = es.eigenvalues();
    ritz_vecs = es.eigenvectors();
    const Eigen::Index k = std::abs(ritz(0)) <= std::abs(ritz(1)) ? 0 : 1;
    const Vector x = q * ritz_vecs.col(k);
    if ((m * x).norm() <= 1e-3 * tol && it >= 3) break;
  }
  int count = 0;
  for (int i = 0; i < 2; ++i) {
    if (std::abs(ritz(i)) <= tol) ++count;
  }
  if (count != 1) throw_null_count(count, tol);
  const Eigen::Index k = std::abs(ritz(0)) <= std::abs(ritz(1)) ? 0 : 1;
  Vector x = q * ritz_vecs.col(k);
  return finish_steady(m, inverse_polish(lu, x / x.norm(), 1));
}

SpectrumReport spectrum(const Superoperator& lambda, double grouping_tol) {
  Eigen::ComplexEigenSolver<Matrix> es(lambda.matrix(), false);
  if (es.info() != Eigen::Success) throw SolverError("Liouvillian eigensolver failed");
  SpectrumReport report;
  report.grouping_tol = grouping_tol;
  const Vector& ev = es.eigenvalues();
  report.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  std::vector<bool> used(report.eigenvalues.size(), false);
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    if (used[i]) continue;
    SpectrumGroup group{report.eigenvalues[i], 0};
    for (std::size_t j = i; j < report.eigenvalues.size(); ++j) {
      if (!used[j] && std::abs(report.eigenvalues[j] - group.value) <= grouping_tol) {
        used[j] = true;
        ++group.multiplicity;
      }
    }
    report.groups.push_back(group);
  }
  return report;
}

std::vector<ProfilePoint> entangling_profile(const Superoperator& lambda_no_reset,
                                             const DensityMatrix& rho_reset,
                                             const std::vector<double>& t_grid) {
  const EvolutionResult evo = evolve(lambda_no_reset, rho_reset, t_grid);
  std::vector<ProfilePoint> out;
  out.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    out.push_back({t_grid[i], average_negativity(evo.states[i]).average});
  }
  return out;
}

std::optional<std::pair<double, double>> predicted_entangled_window(
    const std::vector<ProfilePoint>& profile, double c, double threshold) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const ProfilePoint& p : profile) {
    if (p.t <= 0.0 || p.negativity <= threshold) continue;
    lo = std::min(lo, c / p.t);
    hi = std::max(hi, c / p.t);
  }
  if (hi == 0.0) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace resetlb
