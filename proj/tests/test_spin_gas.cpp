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

#include "resetlb/entanglement.hpp"
#include "resetlb/oracle.hpp"
#include "resetlb/spin_gas.hpp"

namespace resetlb {
namespace {

PhaseMatrix random_phases(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  PhaseMatrix pm(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pm.add_phase(a, b, u(rng));
  }
  return pm;
}

Matrix brute_force_reduction(const PhaseMatrix& pm, const std::vector<int>& keep) {
  const Vector psi = oracle::weighted_graph_state(pm.dense());
  return oracle::partial_trace_loop(psi * psi.adjoint(), pm.size(), keep);
}

TEST(PhaseMatrix, SymmetricAccumulation) {
  PhaseMatrix pm(3);
  pm.add_phase(0, 2, 0.1);
  pm.add_phase(2, 0, 0.2);
  EXPECT_DOUBLE_EQ(pm.phase(0, 2), 0.30000000000000004);
  EXPECT_DOUBLE_EQ(pm.phase(2, 0), pm.phase(0, 2));
  EXPECT_EQ(pm.phase(0, 1), 0.0);
  EXPECT_THROW(pm.add_phase(1, 1, 0.1), std::invalid_argument);
  EXPECT_THROW(pm.phase(0, 3), std::out_of_range);
}

TEST(PhaseMatrix, RetiredQubitsAreFrozen) {
  PhaseMatrix pm(2);
  pm.add_phase(0, 1, 0.5);
  pm.retire(0);
  const int fresh = pm.add_qubit();
  EXPECT_EQ(fresh, 2);
  EXPECT_THROW(pm.add_phase(0, 1, 0.1), std::logic_error);
  EXPECT_NO_THROW(pm.add_phase(2, 1, 0.1));
  EXPECT_DOUBLE_EQ(pm.phase(0, 1), 0.5);
}

TEST(ReducedDensity, MatchesBruteForceForPairs) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const PhaseMatrix pm = random_phases(rng, 8);
    const int i = static_cast<int>(rng() % 8);
    const int j = static_cast<int>((i + 1 + rng() % 7) % 8);
    const int subset[] = {i, j};
    EXPECT_LT((reduced_density(pm, subset).matrix() - brute_force_reduction(pm, {i, j})).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(ReducedDensity, MatchesBruteForceForLargerSubsets) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 10; ++trial) {
    const PhaseMatrix pm = random_phases(rng, 7);
    const std::vector<int> keep = {4, 1, 6};
    EXPECT_LT((reduced_density(pm, keep).matrix() - brute_force_reduction(pm, keep)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ReducedDensity, UncoupledQubitsArePlusStates) {
  const PhaseMatrix pm(4);
  const int subset[] = {0, 3};
  EXPECT_LT((reduced_density(pm, subset).matrix() - Matrix::Constant(4, 4, 0.25)).norm(), 1e-15);
}

TEST(ReducedDensity, RejectsBadSubsets) {
  const PhaseMatrix pm(6);
  const int repeated[] = {1, 1};
  const int outside[] = {0, 6};
  const int too_many[] = {0, 1, 2, 3, 4};
  EXPECT_THROW(reduced_density(pm, repeated), std::invalid_argument);
  EXPECT_THROW(reduced_density(pm, outside), std::out_of_range);
  EXPECT_THROW(reduced_density(pm, too_many), std::invalid_argument);
}

TEST(ReducedDensity, EnvironmentCouplingsCancel) {
  // Phases among traced qubits do not change the reduced pair.
  std::mt19937_64 rng(63);
  PhaseMatrix pm = random_phases(rng, 6);
  const int subset[] = {0, 1};
  const Matrix before = reduced_density(pm, subset).matrix();
  pm.add_phase(2, 3, 0.7);
  pm.add_phase(4, 5, -1.1);
  EXPECT_LT((reduced_density(pm, subset).matrix() - before).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Exchange, GivesFreshPlusQubit) {
  std::mt19937_64 rng(64);
  for (int which = 0; which < 2; ++which) {
    GasState st{random_phases(rng, 6), {}, {0, 1, 2, 3, 4, 5}};
    const Matrix pair = brute_force_reduction(st.phases, {0, 1});
    exchange(st, which);
    const auto ids = st.system_ids();
    const Matrix got = reduced_density(st.phases, ids).matrix();
    const Matrix kept = oracle::partial_trace_loop(pair, 2, {1 - which});
    const Matrix plus = Matrix::Constant(2, 2, 0.5);
    EXPECT_LT((got - (which == 0 ? kron(plus, kept) : kron(kept, plus))).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_FALSE(st.phases.active(which));
  }
  GasState st{PhaseMatrix(3), {}, {0, 1, 2}};
  EXPECT_THROW(exchange(st, 2), std::out_of_range);
}

TEST(Trajectory, InitialPlacement) {
  GasConfig cfg;
  GasRng rng(5);
  const GasState st = initial_gas_state(cfg, rng);
  ASSERT_EQ(st.positions.size(), 10u);
  EXPECT_EQ(st.positions[0], (Site{3, 3}));
  EXPECT_EQ(st.positions[1], (Site{3, 4}));
  for (const Site& p : st.positions) {
    EXPECT_GE(p.row, 0);
    EXPECT_LT(p.row, cfg.rows);
    EXPECT_GE(p.col, 0);
    EXPECT_LT(p.col, cfg.cols);
  }
}

TEST(Trajectory, StepsStayOnLatticeAndMoveByOneSite) {
  GasConfig cfg;
  GasRng rng(6);
  GasState st = initial_gas_state(cfg, rng);
  for (int t = 0; t < 50; ++t) {
    const std::vector<Site> before = st.positions;
    step(st, cfg, rng);
    for (std::size_t k = 0; k < before.size(); ++k) {
      const int dr = std::min(std::abs(st.positions[k].row - before[k].row),
                              cfg.rows - std::abs(st.positions[k].row - before[k].row));
      const int dc = std::min(std::abs(st.positions[k].col - before[k].col),
                              cfg.cols - std::abs(st.positions[k].col - before[k].col));
      EXPECT_LE(dr + dc, 1);
    }
  }
}

TEST(Trajectory, CollisionPhasesFollowParticleKinds) {
  GasConfig cfg;
  cfg.n_env = 1;
  cfg.psi = 0.25;
  cfg.phi = 0.125;
  GasState st{PhaseMatrix(3), {{0, 0}, {0, 0}, {0, 0}}, {0, 1, 2}};
  // All three particles start on one site.
  GasRng rng(7);
  step(st, cfg, rng);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (st.positions[a] == st.positions[b]) {
        EXPECT_DOUBLE_EQ(st.phases.phase(a, b), (a < 2 && b < 2) ? 0.25 : 0.125);
      } else {
        EXPECT_EQ(st.phases.phase(a, b), 0.0);
      }
    }
  }
}

TEST(Trajectory, FullExchangeLeavesProductState) {
  GasConfig cfg;
  cfg.exchange_prob = 1.0;
  cfg.steps = 40;
  GasRng rng(8);
  const GasState st = run_trajectory(cfg, rng);
  const auto ids = st.system_ids();
  EXPECT_EQ(reduced_density(st.phases, ids).matrix(), Matrix::Constant(4, 4, 0.25));
}

TEST(Trajectory, DeterministicForEqualSeeds) {
  GasConfig cfg;
  cfg.exchange_prob = 0.1;
  cfg.steps = 100;
  GasRng a(9);
  GasRng b(9);
  const GasState sa = run_trajectory(cfg, a);
  const GasState sb = run_trajectory(cfg, b);
  EXPECT_EQ(sa.positions, sb.positions);
  EXPECT_EQ(sa.phases.dense(), sb.phases.dense());
}

TEST(Ensemble, FullExchangeIsExactlySeparable) {
  GasConfig cfg;
  cfg.exchange_prob = 1.0;
  cfg.steps = 50;
  const EnsembleResult res = run_ensemble(cfg, 50);
  EXPECT_EQ(res.negativity, 0.0);
  EXPECT_EQ(res.n_runs, 50);
}

TEST(Ensemble, IndependentOfThreadCount) {
  GasConfig cfg;
  cfg.exchange_prob = 0.05;
  cfg.steps = 100;
  const EnsembleResult one = run_ensemble(cfg, 40, 1);
  const EnsembleResult four = run_ensemble(cfg, 40, 4);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.stderr_estimate, four.stderr_estimate);
}

TEST(Ensemble, SeedsChangeResults) {
  GasConfig cfg;
  cfg.exchange_prob = 0.05;
  cfg.steps = 100;
  const EnsembleResult a = run_ensemble(cfg, 20);
  cfg.seed = 2;
  const EnsembleResult b = run_ensemble(cfg, 20);
  EXPECT_NE(a.mean, b.mean);
  EXPECT_NE(derive_run_seed(1, 0), derive_run_seed(1, 1));
  EXPECT_NE(derive_run_seed(1, 0), derive_run_seed(2, 0));
}

TEST(Ensemble, MeanIsValidDensity) {
  GasConfig cfg;
  cfg.exchange_prob = 0.02;
  const EnsembleResult res = run_ensemble(cfg, 30);
  EXPECT_FALSE(check_density(res.mean, 1e-12).has_value());
  EXPECT_GE(res.stderr_estimate, 0.0);
}

TEST(Config, Validation) {
  GasConfig cfg;
  cfg.exchange_prob = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.exchange_prob = 0.5;
  cfg.rows = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(run_ensemble(GasConfig{}, 0), std::invalid_argument);
}

}  // namespace
}  // namespace resetlb
