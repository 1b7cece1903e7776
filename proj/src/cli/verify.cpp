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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include "resetlb/cli.hpp"
#include "resetlb/closed_form.hpp"
#include "resetlb/dynamics.hpp"
#include "resetlb/entanglement.hpp"
#include "resetlb/oracle.hpp"

namespace resetlb::cli {
namespace {

namespace cf = closed_form;

CheckResult within(double deviation, double tol, const VerifyContext& ctx, std::string detail = "") {
  const double scaled = tol * ctx.tol_scale;
  return {deviation <= scaled, deviation, scaled, std::move(detail)};
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix2 ket_density(cplx a, cplx b) {
  Eigen::Vector2cd v(a, b);
  v.normalize();
  return v * v.adjoint();
}

Matrix2 plus_state() { return ket_density(1, 1); }
Matrix2 one_state() { return ket_density(0, 1); }

HamiltonianSpec ham(HamiltonianKind kind, double g, double omega = 0.0, double b = 0.0) {
  HamiltonianSpec h;
  h.kind = kind;
  h.g = g;
  h.omega = omega;
  h.b = b;
  return h;
}

ModelSpec dephasing_ising_model(double g, double gamma, double omega, double r) {
  ModelSpec m;
  m.hamiltonian = ham(HamiltonianKind::kIsing, g, omega);
  m.noise = {0.0, 2.0 * gamma, 0.5};
  m.reset = ResetSpec::uniform(r, plus_state(), 2);
  return m;
}

ModelSpec local_noise_model(HamiltonianKind kind, double B, double C, double s, double g, double omega,
                            double r, const Matrix2& reset) {
  ModelSpec m;
  m.hamiltonian = ham(kind, g, omega);
  m.noise = {B, C, s};
  m.reset = ResetSpec::uniform(r, reset, 2);
  return m;
}

ModelSpec thermal_model(double g, double b, double gamma, double beta, double r) {
  ModelSpec m;
  m.kind = ModelKind::kStronglyCoupled;
  m.hamiltonian = ham(HamiltonianKind::kIsingTransverse, g, 0.0, b);
  m.bath = {gamma, beta};
  m.reset = ResetSpec::uniform(r, plus_state(), 2);
  return m;
}

Matrix numeric_steady(const ModelSpec& m) { return steady_state(build_liouvillian(m)).matrix(); }

// Largest distance in a greedy nearest-neighbour pairing of two multisets.
double multiset_distance(std::vector<cplx> expected, std::vector<cplx> actual) {
  if (expected.size() != actual.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const cplx& e : expected) {
    auto best = actual.begin();
    for (auto it = actual.begin(); it != actual.end(); ++it) {
      if (std::abs(*it - e) < std::abs(*best - e)) best = it;
    }
    worst = std::max(worst, std::abs(*best - e));
    actual.erase(best);
  }
  return worst;
}

std::vector<cplx> expand(const std::vector<std::pair<cplx, int>>& groups) {
  std::vector<cplx> out;
  for (const auto& [v, m] : groups) out.insert(out.end(), static_cast<std::size_t>(m), v);
  return out;
}

std::vector<cplx> dense_eigenvalues(const Superoperator& l) {
  Eigen::ComplexEigenSolver<Matrix> es(l.matrix(), false);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

// Negativity of the Gibbs state of the transverse Ising pair.
double gibbs_negativity(double g, double b, double beta) {
  const QOperator h = build_hamiltonian(ham(HamiltonianKind::kIsingTransverse, g, 0.0, b), 2);
  return pair_negativity(gibbs_state(h, beta).matrix());
}

std::vector<VerifyCheck> make_registry() {
  std::vector<VerifyCheck> checks;
  auto add = [&](std::string name, std::string module, std::string formula,
                 std::function<CheckResult(const VerifyContext&)> fn) {
    checks.push_back({std::move(name), std::move(module), std::move(formula), std::move(fn)});
  };

  add("qop.partial_trace_loop", "qop", "tr_{1} of random 3-qubit states vs index summation",
      [](const VerifyContext& ctx) {
        std::mt19937_64 rng(101);
        double dev = 0.0;
        const int keep[] = {0, 2};
        for (int t = 0; t < 10; ++t) {
          const Matrix rho = oracle::random_density(rng, 8);
          dev = std::max(dev, max_abs(partial_trace(rho, keep) - oracle::partial_trace_loop(rho, 3, {0, 2})));
        }
        return within(dev, 1e-12, ctx);
      });

  add("qop.trace_norm_sqrt", "qop", "trace norm vs sum of sqrt eig(M^dagger M)", [](const VerifyContext& ctx) {
    std::mt19937_64 rng(102);
    double dev = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Matrix m = oracle::random_matrix(rng, 8, 8);
      dev = std::max(dev, std::abs(trace_norm(m) - oracle::trace_norm_sqrt(m)));
    }
    return within(dev, 1e-10, ctx);
  });

  add("liouville.gradient_nondegenerate", "liouville", "ising_gradient n=3 is Hermitian with distinct levels",
      [](const VerifyContext& ctx) {
        const Matrix h = build_hamiltonian(ham(HamiltonianKind::kIsingGradient, 1.0, 0.0, 0.1), 3).matrix();
        const Eigen::VectorXd ev = hermitian_eigenvalues(h);
        double gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 1; i < ev.size(); ++i) gap = std::min(gap, ev(i) - ev(i - 1));
        CheckResult r = within(max_abs(h - h.adjoint()), 1e-14, ctx, "min gap " + format_number(gap));
        r.passed = r.passed && gap > 0.0;
        return r;
      });

  add("liouville.noise_decay_fixed_point", "liouville", "B=1, C=1/2, s=0 single qubit relaxes to |1><1|",
      [](const VerifyContext& ctx) {
        const Matrix ss = steady_state(local_noise_generator(1, {1.0, 0.5, 0.0})).matrix();
        return within(max_abs(ss - Matrix(one_state())), 1e-10, ctx);
      });

  add("liouville.reset_bell_derivative", "liouville", "reset |+>|+> on a Bell state: trace 0, coherence rate 2r",
      [](const VerifyContext& ctx) {
        const double r = 1.5;
        const Superoperator l = reset_generator(2, ResetSpec::uniform(r, plus_state(), 2));
        Vector bell = Vector::Zero(4);
        bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
        const Matrix d = l.apply(bell * bell.adjoint());
        // tr_i of a Bell state is I/2, so the coherence 1/2 decays at 2r.
        const double dev = std::max({std::abs(d.trace()), std::abs(d(0, 3) - cplx(-2 * r * 0.5)),
                                     std::abs(l.matrix()(12, 12) + 2 * r)});
        return within(dev, 1e-12, ctx);
      });

  add("liouville.mixed_reset_psd", "liouville", "Lindblad coefficients of p=0.98 |+> reset are PSD",
      [](const VerifyContext& ctx) {
        const auto b = bloch_components(mixed_state(0.98, Eigen::Vector2cd(1, 1)));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(lindblad_coefficient_matrix(b[0], b[1], b[2], 1.0));
        return within(std::max(0.0, -es.eigenvalues().minCoeff()), 1e-12, ctx,
                      "min eigenvalue " + format_number(es.eigenvalues().minCoeff()));
      });

  add("liouville.thermal_ground_state", "liouville", "beta=1000 steady state vs transverse Ising ground state",
      [](const VerifyContext& ctx) {
        const QOperator h = build_hamiltonian(ham(HamiltonianKind::kIsingTransverse, 1.0, 0.0, 0.1), 2);
        const Matrix ss = steady_state(assemble(h, std::vector<Superoperator>{thermal_generator(h, {1.0, 1000.0})}))
                              .matrix();
        const Vector psi = cf::ising_transverse_ground_state(0.1);
        const double fidelity = (psi.adjoint() * ss * psi)(0, 0).real();
        return within(1.0 - fidelity, 1e-6, ctx);
      });

  add("liouville.action_vs_direct_rhs", "liouville", "Lambda vec(rho) vs direct master-equation RHS, 100 states",
      [](const VerifyContext& ctx) {
        std::mt19937_64 rng(103);
        const Matrix2 st = mixed_state(0.9, Eigen::Vector2cd(1, cplx(0.3, 0.8)));
        ModelSpec m = local_noise_model(HamiltonianKind::kXYZ, 0.8, 0.7, 0.2, 1.3, 0.6, 1.1, st);
        const Superoperator l = build_liouvillian(m);
        const Matrix h = build_hamiltonian(m.hamiltonian, 2).matrix();
        double dev = 0.0;
        for (int t = 0; t < 100; ++t) {
          const Matrix rho = oracle::random_density(rng, 4);
          dev = std::max(dev, max_abs(l.apply(rho) - oracle::gas_rhs(h, 0.8, 0.7, 0.2, 1.1, {st, st}, rho, 2)));
        }
        return within(dev, 1e-12, ctx);
      });

  add("dynamics.spectral_stability", "dynamics", "max Re(lambda) = 0 for assembled generators",
      [](const VerifyContext& ctx) {
        const std::vector<ModelSpec> models = {
            dephasing_ising_model(5, 1, 5, 10),
            local_noise_model(HamiltonianKind::kSxSx, 1, 0.5, 0.5, 2, 2, 3, one_state()),
            thermal_model(10, 0.1, 1, 1000, 20),
        };
        double dev = 0.0;
        for (const ModelSpec& m : models) {
          dev = std::max(dev, std::abs(spectrum(build_liouvillian(m)).eigenvalues.front().real()));
        }
        return within(dev, 1e-9, ctx);
      });

  add("dynamics.predicted_window_overlap", "dynamics",
      "entangling window c/t of the reset-free profile overlaps the entangled steady-state r range",
      [](const VerifyContext& ctx) {
        const double g = 5.0;
        ModelSpec m = dephasing_ising_model(g, 1.0, 0.0, 0.0);
        std::vector<double> ts;
        for (int k = 1; k <= 400; ++k) ts.push_back(0.005 * k);
        const Matrix rho0 = kron(Matrix(plus_state()), Matrix(plus_state()));
        const auto window = predicted_entangled_window(
            entangling_profile(build_liouvillian(m), validate_density(rho0), ts));
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (int k = 0; k <= 60; ++k) {
          const double r = 0.1 * std::pow(10.0, k * 4.0 / 60);
          m.reset.r = r;
          if (pair_negativity(numeric_steady(m)) > 1e-9) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
          }
        }
        CheckResult res;
        res.tolerance = 0.0;
        res.passed = window.has_value() && hi > 0.0 && window->first <= hi && lo <= window->second;
        res.deviation = res.passed ? 0.0 : 1.0;
        res.detail = window ? "predicted [" + format_number(window->first) + ", " + format_number(window->second) +
                                  "], entangled [" + format_number(lo) + ", " + format_number(hi) + "]"
                            : "no entangling window";
        (void)ctx;
        return res;
      });

  add("entanglement.dephasing_ising_value", "entanglement", "numerical N at g=5, r=10 equals 58/4368",
      [](const VerifyContext& ctx) {
        const double n = pair_negativity(numeric_steady(dephasing_ising_model(5, 1, 0, 10)));
        return within(std::abs(n - 58.0 / 4368.0), 1e-9, ctx);
      });

  add("entanglement.ghz_bipartitions", "entanglement", "3-qubit GHZ: every bipartition N = 1/2",
      [](const VerifyContext& ctx) {
        Vector ghz = Vector::Zero(8);
        ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
        const NegativityReport rep = average_negativity(pure_state(ghz));
        double dev = std::abs(rep.average - 0.5);
        for (const auto& [part, n] : rep.per_bipartition) dev = std::max(dev, std::abs(n - 0.5));
        if (rep.bipartition_count != 3) dev = 1.0;
        return within(dev, 1e-12, ctx);
      });

  add("entanglement.convexity", "entanglement", "N(mix of Bell and Z-rotated Bell) <= N of each",
      [](const VerifyContext& ctx) {
        Vector bell = Vector::Zero(4);
        bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
        const Matrix a = bell * bell.adjoint();
        const Matrix z = kron(Matrix(pauli_matrix(Pauli::kZ)), Matrix::Identity(2, 2));
        const Matrix b = z * a * z;
        const double mix = pair_negativity(0.5 * (a + b));
        const double excess = mix - std::min(pair_negativity(a), pair_negativity(b));
        return within(std::max(0.0, excess), 1e-12, ctx, "mixture N " + format_number(mix));
      });

  add("closed_form.dephasing_ising_reset", "closed_form", "steady N of dephasing + Ising + reset |+>",
      [](const VerifyContext& ctx) {
        double dev = std::abs(ctx.dephasing_ising_reset(5, 1, 10) - 58.0 / 4368.0);
        for (double g : {0.5, 2.0, 5.0, 20.0}) {
          for (double r : {0.3, 3.0, 10.0, 40.0}) {
            const double n = pair_negativity(numeric_steady(dephasing_ising_model(g, 1, 0, r)));
            dev = std::max(dev, std::abs(n - ctx.dephasing_ising_reset(g, 1, r)));
          }
        }
        return within(dev, 1e-9, ctx);
      });

  add("closed_form.sxsx_noreset", "closed_form", "sxsx steady state without reset at B=1, omega=1, g=1, s=0",
      [](const VerifyContext& ctx) {
        const cf::SteadyPair expected = cf::steady_sxsx_noreset(1, 0, 1, 1);
        const Matrix got = numeric_steady(local_noise_model(HamiltonianKind::kSxSx, 1, 0.5, 0, 1, 1, 0, one_state()));
        return within(std::max(max_abs(got - expected.rho), std::abs(pair_negativity(got) - expected.negativity)),
                      1e-10, ctx);
      });

  add("closed_form.sxsx_reset", "closed_form", "sxsx + reset |1> steady state and negativity, 20 random points",
      [](const VerifyContext& ctx) {
        std::mt19937_64 rng(104);
        std::uniform_real_distribution<double> u(0.1, 5.0);
        std::uniform_real_distribution<double> us(0.0, 1.0);
        double dev = 0.0;
        for (int t = 0; t < 20; ++t) {
          const double B = u(rng), s = us(rng), g = u(rng), w = u(rng), r = u(rng);
          const Matrix got =
              numeric_steady(local_noise_model(HamiltonianKind::kSxSx, B, B / 2, s, g, w, r, one_state()));
          dev = std::max(dev, max_abs(got - ctx.sxsx_reset(B, s, g, w, r)));
          dev = std::max(dev, std::abs(pair_negativity(got) - cf::steady_sxsx_reset(B, s, g, w, r).negativity));
        }
        return within(dev, 1e-10, ctx);
      });

  add("closed_form.thermal_crossing", "closed_form", "root of thermal N formula vs Gibbs-state sign change",
      [](const VerifyContext& ctx) {
        const double g = 1.0;
        const double b = 0.1;
        const double formula = cf::thermal_crossing_beta(g, b, 1e-3, 1e3);
        double lo = 1e-3;
        double hi = 1e3;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
          const double mid = std::sqrt(lo * hi);
          (gibbs_negativity(g, b, mid) > 1e-13 ? hi : lo) = mid;
        }
        const double numeric = 0.5 * (lo + hi);
        return within(std::abs(formula - numeric) / numeric, 1e-6, ctx,
                      "beta* " + format_number(formula) + " vs " + format_number(numeric));
      });

  add("closed_form.transient_solution", "closed_form", "analytic time evolution vs evolve on t in [0, 5/gamma]",
      [](const VerifyContext& ctx) {
        std::mt19937_64 rng(105);
        const cf::AppendixAParams p{5.0, 1.0, 5.0, 10.0};
        const Superoperator l = build_liouvillian(dephasing_ising_model(p.g, p.gamma, p.omega, p.r));
        std::vector<double> ts;
        for (int k = 0; k <= 50; ++k) ts.push_back(0.1 * k);
        double dev = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
          const Matrix rho0 = oracle::random_density(rng, 4);
          const cf::ClosedFormSolution sol = cf::fit_appendixA(p, rho0);
          const EvolutionResult evo = evolve(l, validate_density(rho0), ts);
          for (std::size_t k = 0; k < ts.size(); ++k) {
            dev = std::max(dev, max_abs(evo.states[k].matrix() - cf::appendixA_solution(sol, ts[k])));
          }
        }
        return within(dev, 1e-8, ctx);
      });

  add("closed_form.local_noise_reset", "closed_form", "Ising + local noise + reset |+> steady state, 20 points",
      [](const VerifyContext& ctx) {
        std::mt19937_64 rng(106);
        std::uniform_real_distribution<double> u(0.1, 5.0);
        std::uniform_real_distribution<double> us(0.0, 1.0);
        double dev = 0.0;
        for (int t = 0; t < 20; ++t) {
          const double B = u(rng), s = us(rng), g = u(rng), w = u(rng), r = u(rng);
          const double C = B / 2 + u(rng);
          const Matrix got =
              numeric_steady(local_noise_model(HamiltonianKind::kIsing, B, C, s, g, w, r, plus_state()));
          dev = std::max(dev, max_abs(got - ctx.local_noise_reset(B, C, s, g, w, r)));
        }
        return within(dev, 1e-9, ctx);
      });

  add("closed_form.spectrum_specialized", "closed_form", "eigenvalue list at r=g=omega=0 vs dense eigensolve",
      [](const VerifyContext& ctx) {
        const auto formula = expand(cf::spectrum_dephasing_reset(0, 1, 0, 0));
        const auto numeric = dense_eigenvalues(build_liouvillian(dephasing_ising_model(0, 1, 0, 0)));
        return within(multiset_distance(formula, numeric), 1e-8, ctx);
      });

  add("closed_form.spectrum_generic", "closed_form", "eigenvalue list at gamma=1, r=2, g=1, omega=1",
      [](const VerifyContext& ctx) {
        const auto formula = expand(cf::spectrum_dephasing_reset(1, 1, 1, 2));
        const auto numeric = spectrum(build_liouvillian(dephasing_ising_model(1, 1, 1, 2))).eigenvalues;
        return within(multiset_distance(formula, numeric), 1e-8, ctx);
      });

  add("spin_gas.exchange_reduction", "spin_gas", "after an exchange the pair is |+><+| x tr_old(pair)",
      [](const VerifyContext& ctx) {
        std::mt19937_64 rng(107);
        std::uniform_real_distribution<double> u(-M_PI, M_PI);
        double dev = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
          GasState st{PhaseMatrix(7), {}, {0, 1, 2, 3, 4, 5, 6}};
          for (int a = 0; a < 7; ++a) {
            for (int b = a + 1; b < 7; ++b) st.phases.add_phase(a, b, u(rng));
          }
          const Eigen::MatrixXd before = st.phases.dense();
          const int which = trial % 2;
          exchange(st, which);
          const auto ids = st.system_ids();
          const Matrix got = reduced_density(st.phases, ids).matrix();

          const Vector psi = oracle::weighted_graph_state(before);
          const Matrix pair = oracle::partial_trace_loop(psi * psi.adjoint(), 7, {0, 1});
          const Matrix kept = oracle::partial_trace_loop(pair, 2, {1 - which});
          const Matrix plus = plus_state();
          const Matrix expected = which == 0 ? kron(plus, kept) : kron(kept, plus);
          dev = std::max(dev, max_abs(got - expected));
        }
        return within(dev, 1e-12, ctx);
      });

  add("spin_gas.reduced_density_bruteforce", "spin_gas", "pair reduction vs 2^8 state vector, 50 phase matrices",
      [](const VerifyContext& ctx) {
        std::mt19937_64 rng(108);
        std::uniform_real_distribution<double> u(-M_PI, M_PI);
        double dev = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
          PhaseMatrix pm(8);
          for (int a = 0; a < 8; ++a) {
            for (int b = a + 1; b < 8; ++b) pm.add_phase(a, b, u(rng));
          }
          const int i = static_cast<int>(rng() % 8);
          const int j = static_cast<int>((i + 1 + rng() % 7) % 8);
          const int subset[] = {i, j};
          const Vector psi = oracle::weighted_graph_state(pm.dense());
          const Matrix expected = oracle::partial_trace_loop(psi * psi.adjoint(), 8, {i, j});
          dev = std::max(dev, max_abs(reduced_density(pm, subset).matrix() - expected));
        }
        return within(dev, 1e-12, ctx);
      });

  add("spin_gas.ensemble_hump", "spin_gas", "N=0 at exchange 1, N > 3 stderr at an intermediate exchange",
      [](const VerifyContext& ctx) {
        GasConfig cfg;
        cfg.exchange_prob = 1.0;
        const EnsembleResult full = run_ensemble(cfg, 200);
        double best_ratio = 0.0;
        std::string detail = "N(p=1) " + format_number(full.negativity);
        for (double p : {0.01, 0.03, 0.1}) {
          cfg.exchange_prob = p;
          const EnsembleResult mid = run_ensemble(cfg, 400);
          const double ratio = mid.stderr_estimate > 0 ? mid.negativity / mid.stderr_estimate : 0.0;
          best_ratio = std::max(best_ratio, ratio);
          detail += ", N(p=" + format_number(p) + ") " + format_number(mid.negativity) + " +- " +
                    format_number(mid.stderr_estimate);
        }
        CheckResult res = within(full.negativity, 0.0, ctx, detail);
        res.passed = res.passed && best_ratio > 3.0;
        return res;
      });

  return checks;
}

}  // namespace

VerifyContext::VerifyContext()
    : dephasing_ising_reset(cf::neg_dephasing_ising_reset),
      sxsx_reset([](double B, double s, double g, double w, double r) {
        return cf::steady_sxsx_reset(B, s, g, w, r).rho;
      }),
      local_noise_reset(cf::appendixB_steady) {}

const std::vector<VerifyCheck>& verify_registry() {
  static const std::vector<VerifyCheck> registry = make_registry();
  return registry;
}

VerifyOutcome run_verify(const VerifyContext& ctx, std::ostream& out, const std::string& filter) {
  VerifyOutcome outcome;
  for (const VerifyCheck& check : verify_registry()) {
    if (!filter.empty() && check.name.find(filter) == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = check.run(ctx);
    } catch (const std::exception& e) {
      r.passed = false;
      r.deviation = std::numeric_limits<double>::infinity();
      r.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << (r.passed ? "PASS " : "FAIL ") << check.name << "  [" << check.module << "] " << check.formula
        << "  max deviation " << format_number(r.deviation) << " (tol " << format_number(r.tolerance) << ")";
    if (!r.detail.empty()) out << "  " << r.detail;
    char buf[32];
    std::snprintf(buf, sizeof buf, "  %.2fs", secs);
    out << buf << "\n";
    if (!r.passed) {
      outcome.all_passed = false;
      outcome.failed.push_back(check.name);
    }
  }
  if (outcome.all_passed) {
    out << "verify: all checks passed\n";
  } else {
    out << "verify: " << outcome.failed.size() << " check(s) failed\n";
  }
  return outcome;
}

}  // namespace resetlb::cli
