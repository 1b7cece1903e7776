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

#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "resetlb/oracle.hpp"
#include "resetlb/closed_form.hpp"
#include "resetlb/dynamics.hpp"
#include "resetlb/liouville.hpp"

namespace resetlb {
namespace {

Matrix2 ket_state(cplx a, cplx b) {
  Eigen::Vector2cd v(a, b);
  v.normalize();
  return v * v.adjoint();
}

const Matrix2 kPlus = ket_state(1, 1);
const Matrix2 kOne = ket_state(0, 1);

HamiltonianSpec spec_of(HamiltonianKind kind, double g, double omega = 0, double b = 0) {
  HamiltonianSpec s;
  s.kind = kind;
  s.g = g;
  s.omega = omega;
  s.b = b;
  return s;
}

TEST(BuildHamiltonian, IsingDiagonal) {
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsing, 0.7), 2);
  const Eigen::Vector4cd d(0.7, -0.7, -0.7, 0.7);
  EXPECT_LT((h.matrix() - Matrix(d.asDiagonal())).norm(), 1e-15);
}

TEST(BuildHamiltonian, TransverseIsingEigenvalues) {
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsingTransverse, 1.0, 0, 1.0), 2);
  const Eigen::VectorXd ev = hermitian_eigenvalues(h.matrix());
  const double r5 = std::sqrt(5.0);
  EXPECT_NEAR(ev(0), -r5, 1e-12);
  EXPECT_NEAR(ev(1), -1.0, 1e-12);
  EXPECT_NEAR(ev(2), 1.0, 1e-12);
  EXPECT_NEAR(ev(3), r5, 1e-12);
}

TEST(BuildHamiltonian, GradientLiftsDegeneracy) {
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsingGradient, 1.0, 0, 0.1), 3);
  EXPECT_LT((h.matrix() - h.matrix().adjoint()).norm(), 1e-15);
  const Eigen::VectorXd ev = hermitian_eigenvalues(h.matrix());
  for (Eigen::Index i = 1; i < ev.size(); ++i) EXPECT_GT(ev(i) - ev(i - 1), 0.0);

  // Without the gradient the symmetric model is exactly degenerate.
  const QOperator flat = build_hamiltonian(spec_of(HamiltonianKind::kIsingTransverse, 1.0, 0, 0.1), 3);
  const Eigen::VectorXd fv = hermitian_eigenvalues(flat.matrix());
  double min_gap = 1e9;
  for (Eigen::Index i = 1; i < fv.size(); ++i) min_gap = std::min(min_gap, fv(i) - fv(i - 1));
  EXPECT_LT(min_gap, 1e-13);
}

TEST(BuildHamiltonian, GradientSplittingIsBelowThermalTolerance) {
  // The 1e-5 gradient only splits some levels at second order, far below
  // the thermal generator's degeneracy threshold.
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsingGradient, 15.0, 0, 0.1), 3);
  EXPECT_THROW(thermal_generator(h, {1.0, 0.2}), std::invalid_argument);
  const QOperator h2 = build_hamiltonian(spec_of(HamiltonianKind::kIsingGradient, 15.0, 0, 0.1), 2);
  EXPECT_NO_THROW(thermal_generator(h2, {1.0, 0.2}));
}

TEST(BuildHamiltonian, XYZMatchesKroneckerConstruction) {
  HamiltonianSpec s = spec_of(HamiltonianKind::kXYZ, 2.5, 4.0);
  const Matrix h = build_hamiltonian(s, 2).matrix();
  using namespace oracle;
  const Matrix expected =
      2.5 * (0.7 * site_op(sx(), 2, 0) * site_op(sx(), 2, 1) + 0.3 * site_op(sy(), 2, 0) * site_op(sy(), 2, 1) +
             site_op(sz(), 2, 0) * site_op(sz(), 2, 1) + 0.5 * (site_op(sx(), 2, 0) + site_op(sx(), 2, 1))) +
      2.0 * (site_op(sz(), 2, 0) + site_op(sz(), 2, 1));
  EXPECT_LT((h - expected).norm(), 1e-14);
}

TEST(BuildHamiltonian, CustomMustBeHermitian) {
  HamiltonianSpec s;
  s.kind = HamiltonianKind::kCustom;
  s.custom = Matrix::Zero(2, 2);
  s.custom(0, 1) = 1.0;
  EXPECT_THROW(build_hamiltonian(s, 1), std::invalid_argument);
  s.custom(1, 0) = 1.0;
  EXPECT_NO_THROW(build_hamiltonian(s, 1));
  EXPECT_THROW(build_hamiltonian(spec_of(HamiltonianKind::kIsing, 1.0), 1), std::invalid_argument);
}

TEST(BuildHamiltonian, KindNamesRoundTrip) {
  for (auto k : {HamiltonianKind::kIsing, HamiltonianKind::kSxSx, HamiltonianKind::kXYZ,
                 HamiltonianKind::kIsingTransverse, HamiltonianKind::kIsingGradient, HamiltonianKind::kCustom}) {
    EXPECT_EQ(parse_hamiltonian_kind(hamiltonian_kind_name(k)), k);
  }
  EXPECT_FALSE(parse_hamiltonian_kind("heisenberg").has_value());
}

TEST(LocalNoise, DecayToLowerState) {
  const Superoperator l = local_noise_generator(1, {1.0, 0.5, 0.0});
  const DensityMatrix ss = steady_state(l);
  EXPECT_NEAR(ss.matrix()(1, 1).real(), 1.0, 1e-12);
}

TEST(LocalNoise, FixedPointPopulationIsS) {
  for (double s : {0.0, 0.1, 0.5, 0.8, 1.0}) {
    const DensityMatrix ss = steady_state(local_noise_generator(1, {1.3, 2.0, s}));
    EXPECT_NEAR(ss.matrix()(0, 0).real(), s, 1e-12);
  }
}

TEST(LocalNoise, DephasingSpecialCase) {
  for (int n : {1, 2}) {
    const double gamma = 0.37;
    const Matrix a = local_noise_generator(n, {0.0, 2 * gamma, 0.3}).matrix();
    const Matrix b = dephasing_generator(n, gamma).matrix();
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(LocalNoise, TracePreservingOnRandomStates) {
  std::mt19937_64 rng(21);
  const Superoperator l = local_noise_generator(2, {0.8, 1.1, 0.25});
  EXPECT_LT(l.trace_defect(), 1e-14);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_LT(std::abs(l.apply(oracle::random_density(rng, 4)).trace()), 1e-13);
  }
}

TEST(LocalNoise, RejectsInvalidParameters) {
  EXPECT_THROW(local_noise_generator(1, {-1.0, 1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(local_noise_generator(1, {1.0, 0.4, 0.5}), std::invalid_argument);
  EXPECT_THROW(local_noise_generator(1, {1.0, 1.0, 1.5}), std::invalid_argument);
}

TEST(Dephasing, DiagonalStatesAreFixed) {
  const Superoperator l = dephasing_generator(2, 0.9);
  const Eigen::Vector4cd d(0.1, 0.2, 0.3, 0.4);
  EXPECT_LT(l.apply(Matrix(d.asDiagonal())).norm(), 1e-15);
}

TEST(Dephasing, CoherenceDecaysAtTwiceGamma) {
  const double gamma = 0.6;
  const Superoperator l = dephasing_generator(1, gamma);
  const DensityMatrix plus = validate_density(Matrix(kPlus));
  const std::vector<double> times = {0.5, 1.0, 2.0};
  const EvolutionResult evo = evolve(l, plus, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(evo.states[i].matrix()(0, 1).real(), 0.5 * std::exp(-2 * gamma * times[i]), 1e-12);
  }
}

TEST(Reset, SingleQubitFixedPointIsResetState) {
  const Superoperator l = reset_generator(1, ResetSpec::uniform(2.0, kPlus, 1));
  EXPECT_LT((steady_state(l).matrix() - Matrix(kPlus)).norm(), 1e-12);
}

TEST(Reset, BellStateDerivative) {
  const double r = 1.7;
  const Superoperator l = reset_generator(2, ResetSpec::uniform(r, kPlus, 2));
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  const Matrix rho = bell * bell.adjoint();
  const Matrix d = l.apply(rho);
  EXPECT_LT(std::abs(d.trace()), 1e-15);
  // tr_i of a Bell state is I/2, so the reset feeds no anti-diagonal
  // coherence back and the Bell coherence 1/2 decays at 2r.
  EXPECT_NEAR(d(0, 3).real(), -2 * r * 0.5, 1e-14);
  EXPECT_NEAR(d(3, 0).real(), -2 * r * 0.5, 1e-14);
  // The anti-diagonal part of the generator alone decays at rate 2r.
  EXPECT_NEAR(l.matrix()(0 + 4 * 3, 0 + 4 * 3).real(), -2 * r, 1e-14);
}

TEST(Reset, ZeroRateIsZero) {
  const Superoperator l = reset_generator(3, ResetSpec::uniform(0.0, kPlus, 3));
  EXPECT_EQ(l.matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Reset, MatchesDirectRhsOracle) {
  std::mt19937_64 rng(22);
  std::vector<Matrix2> states = {kPlus, Matrix2(ket_state(0.3, cplx(0.2, 0.9))), kOne};
  const ResetSpec spec{0.9, states};
  const Superoperator l = reset_generator(3, spec);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = oracle::random_density(rng, 8);
    const Matrix expected = oracle::gas_rhs(Matrix::Zero(8, 8), 0, 0, 0, 0.9,
                                            {states[0], states[1], states[2]}, rho, 3);
    EXPECT_LT((l.apply(rho) - expected).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Reset, RejectsInvalidStates) {
  Matrix2 bad = kPlus;
  bad(0, 0) = 0.8;
  EXPECT_THROW(reset_generator(1, ResetSpec::uniform(1.0, bad, 1)), std::invalid_argument);
  EXPECT_THROW(reset_generator(2, ResetSpec::uniform(1.0, kPlus, 1)), std::invalid_argument);
}

TEST(Bloch, RoundTripAndPurity) {
  const Matrix2 st = bloch_state(0.1, -0.2, 0.3);
  const auto b = bloch_components(st);
  EXPECT_NEAR(b[0], 0.1, 1e-15);
  EXPECT_NEAR(b[1], -0.2, 1e-15);
  EXPECT_NEAR(b[2], 0.3, 1e-15);
  EXPECT_NEAR(purity_parameter(mixed_state(0.97, Eigen::Vector2cd(1, 1))), 0.97, 1e-14);
  EXPECT_NEAR(purity_parameter(kPlus), 1.0, 1e-14);
  EXPECT_THROW(bloch_state(0.5, 0.1, 0.0), std::invalid_argument);
}

Eigen::Vector3d sorted_eigs(const Eigen::Matrix3cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(m);
  return es.eigenvalues();
}

TEST(LindbladMatrix, PureStateEigenvalues) {
  const double r = 2.0;
  const Eigen::Vector3d ev = sorted_eigs(lindblad_coefficient_matrix(0.5, 0, 0, r));
  EXPECT_NEAR(ev(0), 0.0, 1e-15);
  EXPECT_NEAR(ev(1), r / 8, 1e-15);
  EXPECT_NEAR(ev(2), r / 4, 1e-15);
}

TEST(LindbladMatrix, MaximallyMixedIsScalar) {
  const Eigen::Vector3d ev = sorted_eigs(lindblad_coefficient_matrix(0, 0, 0, 1.0));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev(i), 1.0 / 8, 1e-15);
}

TEST(LindbladMatrix, SlightlyMixedPlusIsPositive) {
  const auto b = bloch_components(mixed_state(0.98, Eigen::Vector2cd(1, 1)));
  const Eigen::Vector3d ev = sorted_eigs(lindblad_coefficient_matrix(b[0], b[1], b[2], 3.0));
  EXPECT_GE(ev(0), 0.0);
  EXPECT_NEAR(ev(0), 3.0 / 8 * (1 - 0.98), 1e-14);
}

TEST(LindbladMatrix, PositiveIffInsideBlochBall) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::Vector3d v(nd(rng), nd(rng), nd(rng));
    const double len = 0.8 * std::uniform_real_distribution<double>(0, 1)(rng);
    v = v.normalized() * len;
    const double min_eig = sorted_eigs(lindblad_coefficient_matrix(v(0), v(1), v(2), 1.0))(0);
    EXPECT_EQ(min_eig >= -1e-15, len <= 0.5) << "radius " << len;
  }
}

TEST(LindbladMatrix, GeneratorEqualsResetTerm) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix2 st = oracle::random_density(rng, 2);
    const auto b = bloch_components(st);
    const double r = 0.4 + trial;
    const Matrix reset = reset_generator(1, ResetSpec{r, {st}}).matrix();
    const Matrix pauli = pauli_lindblad_generator(1, 0, lindblad_coefficient_matrix(b[0], b[1], b[2], r)).matrix();
    EXPECT_LT((reset - pauli).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(LindbladMatrix, GeneratorSumsOverSites) {
  std::mt19937_64 rng(29);
  const Matrix2 s0 = oracle::random_density(rng, 2);
  const Matrix2 s1 = oracle::random_density(rng, 2);
  const auto b0 = bloch_components(s0);
  const auto b1 = bloch_components(s1);
  const double r = 1.7;
  const Matrix reset = reset_generator(2, ResetSpec{r, {s0, s1}}).matrix();
  const Matrix pauli =
      pauli_lindblad_generator(2, 0, lindblad_coefficient_matrix(b0[0], b0[1], b0[2], r)).matrix() +
      pauli_lindblad_generator(2, 1, lindblad_coefficient_matrix(b1[0], b1[1], b1[2], r)).matrix();
  EXPECT_LT((reset - pauli).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Thermal, ZeroCouplingIsZero) {
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsingTransverse, 1.0, 0, 0.3), 2);
  EXPECT_EQ(thermal_generator(h, {0.0, 1.0}).matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Thermal, DegenerateHamiltonianThrows) {
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsing, 1.0), 2);
  EXPECT_THROW(thermal_generator(h, {1.0, 1.0}), std::invalid_argument);
}

TEST(Thermal, LowTemperatureGroundState) {
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsingTransverse, 1.0, 0, 0.1), 2);
  const Superoperator l = assemble(h, std::vector<Superoperator>{thermal_generator(h, {1.0, 1000.0})});
  const DensityMatrix ss = steady_state(l);
  const Vector psi0 = closed_form::ising_transverse_ground_state(0.1);
  const double fidelity = (psi0.adjoint() * ss.matrix() * psi0)(0, 0).real();
  EXPECT_GT(fidelity, 1 - 1e-6);
}

TEST(Thermal, GibbsFixedPoint) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> ub(0.1, 10.0);
  for (int trial = 0; trial < 8; ++trial) {
    const double beta = ub(rng);
    for (auto kind : {HamiltonianKind::kIsingTransverse, HamiltonianKind::kIsingGradient}) {
      const QOperator h = build_hamiltonian(spec_of(kind, 1.0, 0.3, 0.4), 2);
      const Superoperator l = assemble(h, std::vector<Superoperator>{thermal_generator(h, {0.7, beta})});
      const Matrix diff = steady_state(l).matrix() - gibbs_state(h, beta).matrix();
      EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-8) << "beta " << beta;
    }
  }
}

TEST(Thermal, MatchesJumpOperatorConstruction) {
  // Same generator assembled from explicit jump operators |b><a|.
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsingTransverse, 1.0, 0.5, 0.3), 2);
  const double gamma = 0.8;
  const double beta = 0.9;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  const Matrix& v = es.eigenvectors();
  const Eigen::VectorXd& w = es.eigenvalues();
  Matrix expected = Matrix::Zero(16, 16);
  for (int j = 0; j < 2; ++j) {
    const Matrix sm = v.adjoint() * oracle::site_op(oracle::sminus(), 2, j) * v;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        if (a == b) continue;
        double k = 0;
        if (w(b) > w(a)) k = std::norm(sm(a, b)) / std::expm1(beta * (w(b) - w(a)));
        if (w(a) > w(b)) k = std::norm(sm(b, a)) * (1 + 1 / std::expm1(beta * (w(a) - w(b))));
        const Matrix jump = v.col(b) * v.col(a).adjoint();
        expected += dissipator(jump, 2 * gamma * k);
      }
    }
  }
  EXPECT_LT((thermal_generator(h, {gamma, beta}).matrix() - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Assemble, EmptyIsZero) {
  const QOperator h(Matrix::Zero(4, 4));
  EXPECT_EQ(assemble(h, {}).matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assemble, SizeAndDirectRhsOracle) {
  std::mt19937_64 rng(26);
  const QOperator h = build_hamiltonian(spec_of(HamiltonianKind::kIsing, 1.3, 0.7), 2);
  const std::vector<Superoperator> parts = {dephasing_generator(2, 0.4),
                                            reset_generator(2, ResetSpec::uniform(2.1, kPlus, 2))};
  const Superoperator l = assemble(h, parts);
  EXPECT_EQ(l.matrix().rows(), 16);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix rho = oracle::random_density(rng, 4);
    const Matrix expected = oracle::gas_rhs(h.matrix(), 0, 0.8, 0, 2.1, {kPlus, kPlus}, rho, 2);
    EXPECT_LT((l.apply(rho) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Assemble, GasModelMatchesDirectRhsOracleOnThreeQubits) {
  std::mt19937_64 rng(27);
  ModelSpec m;
  m.n_qubits = 3;
  m.hamiltonian = spec_of(HamiltonianKind::kXYZ, 0.9, 1.2);
  m.noise = {0.7, 0.6, 0.2};
  const Matrix2 st = mixed_state(0.9, Eigen::Vector2cd(1, cplx(0, 1)));
  m.reset = ResetSpec::uniform(1.4, st, 3);
  const Superoperator l = build_liouvillian(m);
  const Matrix hm = build_hamiltonian(m.hamiltonian, 3).matrix();
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = oracle::random_density(rng, 8);
    const Matrix expected = oracle::gas_rhs(hm, 0.7, 0.6, 0.2, 1.4, {st, st, st}, rho, 3);
    EXPECT_LT((l.apply(rho) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Assemble, DimensionMismatchThrows) {
  const QOperator h(Matrix::Zero(4, 4));
  const std::vector<Superoperator> parts = {dephasing_generator(3, 1.0)};
  EXPECT_THROW(assemble(h, parts), std::invalid_argument);
}

TEST(Assemble, TracePreservationAndPositivityOfEvolution) {
  std::mt19937_64 rng(28);
  std::vector<ModelSpec> models;
  {
    ModelSpec m;
    m.hamiltonian = spec_of(HamiltonianKind::kSxSx, 1.0, 1.0);
    m.noise = {1.0, 0.5, 0.2};
    m.reset = ResetSpec::uniform(0.5, kOne, 2);
    models.push_back(m);
  }
  {
    ModelSpec m;
    m.kind = ModelKind::kStronglyCoupled;
    m.hamiltonian = spec_of(HamiltonianKind::kIsingTransverse, 2.0, 0.0, 0.2);
    m.bath = {1.0, 2.0};
    m.reset = ResetSpec::uniform(3.0, kPlus, 2);
    models.push_back(m);
  }
  for (const ModelSpec& m : models) {
    const Superoperator l = build_liouvillian(m);
    EXPECT_LT(l.trace_defect(), 1e-12);
    const double max_rate = l.matrix().cwiseAbs().maxCoeff();
    std::vector<double> times;
    for (int k = 1; k <= 20; ++k) times.push_back(k * 0.5 / max_rate);
    const DensityMatrix rho0 = validate_density(oracle::random_density(rng, 4));
    const EvolutionResult evo = evolve(l, rho0, times);
    for (const DensityMatrix& st : evo.states) {
      EXPECT_FALSE(check_density(st.matrix(), 1e-9).has_value());
    }
  }
}

}  // namespace
}  // namespace resetlb
