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

#include "resetlb/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace resetlb::closed_form {
namespace {

constexpr cplx I{0.0, 1.0};

// Minimum distance from the r = 4g branch point.
constexpr double kBranchNudge = 1e-12;

void fill_lower(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m(i, i) = m(i, i).real();
    for (Eigen::Index j = 0; j < i; ++j) m(i, j) = std::conj(m(j, i));
  }
}

double sxsx_reset_q(double B, double g, double w2, double r) {
  return (B + r) * w2 * w2 + (B + 2 * r) * (4 * g * g + (B + r) * (B + 2 * r));
}

}  // namespace

double neg_dephasing_ising_reset_raw(double g, double gamma, double r) {
  const double num = 2 * gamma * (r + gamma) * (r + gamma) + g * g * (r + 2 * gamma) -
                     r * (r + 2 * gamma) * g;
  const double den = 2 * (r + 2 * gamma) * (2 * g * g + (r + gamma) * (r + 2 * gamma));
  return -num / den;
}

double neg_dephasing_ising_reset(double g, double gamma, double r) {
  if (g < 0 || gamma < 0 || r < 0) throw std::invalid_argument("rates must be non-negative");
  if (g == 0 && gamma == 0 && r == 0) throw std::invalid_argument("all rates are zero");
  return std::max(0.0, neg_dephasing_ising_reset_raw(g, gamma, r));
}

double antidiagonal_dephasing_ising_reset(double g, double gamma, double r) {
  return r * r * (r + gamma) /
         (4 * (r + 2 * gamma) * (2 * g * g + (r + gamma) * (r + 2 * gamma)));
}

SteadyPair steady_sxsx_noreset(double B, double s, double g, double omega) {
  const double bw = B * B + 4 * omega * omega;
  const double d = B * B + 4 * (g * g + omega * omega);
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = (g * g + s * s * bw) / d;
  m(1, 1) = (g * g - (s - 1) * s * bw) / d;
  m(2, 2) = m(1, 1);
  m(3, 3) = (g * g + B * B * (s - 1) * (s - 1) + 4 * (s - 1) * (s - 1) * omega * omega) / d;
  m(0, 3) = g * (2 * s - 1) * (I * B + 2 * omega) / d;
  fill_lower(m);
  const double neg = (d * ((s - 1) * s * bw - g * g) + g * std::abs(1 - 2 * s) * std::sqrt(bw) * d) /
                     (d * d);
  return {m, std::max(0.0, neg)};
}

SteadyPair steady_sxsx_reset(double B, double s, double g, double omega, double r) {
  // These coefficients carry the level splitting as 2 omega.
  const double w = 2 * omega;
  const double q = sxsx_reset_q(B, g, w, r);
  const double den = (B + r) * q;
  const double b2r = B + 2 * r;
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = (B * B * s * s * w * w + b2r * ((B + r) * g * g + B * B * b2r * s * s)) / den;
  m(1, 1) = (b2r * ((B + r) * g * g - B * B * b2r * s * s + B * (B + r) * b2r * s) -
             B * s * (s * B - B - r) * w * w) /
            den;
  m(2, 2) = m(1, 1);
  const double f = -s * B + B + r;
  m(3, 3) = (f * f * w * w + b2r * (B * B * b2r * s * s - 2 * B * (B + r) * b2r * s +
                                    (B + r) * (g * g + (B + r) * b2r))) /
            den;
  m(0, 3) = g * (2 * s * B - B - r) * (I * b2r + w) / q;
  fill_lower(m);
  const double e = B + r - 2 * s * B;
  const double k = (b2r * b2r + w * w) * e * e;
  const double neg =
      -0.25 * (-k / ((B + r) * q) - 4 * std::sqrt(g * g * k / (q * q)) + 1);
  return {m, std::max(0.0, neg)};
}

double thermal_negativity_raw(double g, double b, double beta) {
  const double k = std::sqrt(4 * b * b + 1);
  const double x = g * beta;
  // cosh(x) / cosh(k x) written with decaying exponentials so that large
  // beta does not overflow.
  const double ax = std::abs(x);
  const double c = std::exp(ax - k * ax) * (1 + std::exp(-2 * ax)) / (1 + std::exp(-2 * k * ax));
  const double t = std::tanh(k * x) / k;
  return -(c - t) / (2 * (c + 1));
}

double thermal_negativity_ising_field(double g, double b, double beta) {
  if (b == 0) throw std::invalid_argument("b = 0 gives a degenerate ground state");
  return std::max(0.0, thermal_negativity_raw(g, b, beta));
}

Vector ising_transverse_ground_state(double b) {
  if (b == 0) throw std::invalid_argument("b = 0 gives a degenerate ground state");
  const double c = (-1 - std::sqrt(1 + 4 * b * b)) / (2 * b);
  Vector v(4);
  v << 1, c, c, 1;
  return v / v.norm();
}

double thermal_crossing_beta(double g, double b, double lo, double hi, double tol) {
  double flo = thermal_negativity_raw(g, b, lo);
  const double fhi = thermal_negativity_raw(g, b, hi);
  if (!(flo < 0 && fhi > 0)) throw std::invalid_argument("bracket does not contain the crossing");
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const double fm = thermal_negativity_raw(g, b, mid);
    if (fm < 0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Matrix appendixA_solution(const ClosedFormSolution& sol, double t) {
  const double g = sol.params.g;
  const double gam = sol.params.gamma;
  const double w = sol.params.omega;
  double r = sol.params.r;
  if (std::abs(r - 4 * g) < kBranchNudge) r = 4 * g + kBranchNudge;
  const auto& c = sol.constants;
  const cplx D2 = c[0], D3 = c[1], D4 = c[2];
  const cplx OD1 = c[3], OD2 = c[4], OD3 = c[5], OD4 = c[6];
  const cplx AD1 = c[7], AD2 = c[8];
  const cplx S = std::sqrt(cplx(r * r - 16 * g * g));
  // sqrt(16 g^2 - r^2) on the same branch as S.
  const cplx Q = -I * S;
  auto e = [](cplx x) { return std::exp(x); };

  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.25 + 0.25 * D2 * e(-2 * r * t) + 0.5 * D3 * e(-r * t);
  m(1, 1) = 0.25 - 0.25 * D2 * e(-2 * r * t) + 0.5 * D4 * e(-r * t);
  m(2, 2) = 0.25 - 0.25 * D2 * e(-2 * r * t) - 0.5 * D4 * e(-r * t);
  m(3, 3) = 0.25 + 0.25 * D2 * e(-2 * r * t) - 0.5 * D3 * e(-r * t);

  const cplx osc = e(-0.5 * t * (3 * r + 4 * gam + 2.0 * I * w + S));
  const cplx stat_den = 4.0 * (2 * g * g + (r + gam + I * w / 2.0) * (r + 2 * gam + I * w));
  const cplx tr_den = 4.0 * (4 * g * g + (2 * gam + I * w) * (r + 2 * gam + I * w));
  auto off_diagonal = [&](cplx dsum, cplx o1, cplx o2) {
    const cplx upper = r * (-I * g + r + gam + I * w / 2.0) / stat_den -
                       dsum * e(-r * t) * r * (2.0 * I * g - 2 * gam - I * w) / tr_den -
                       osc * (e(S * t) * o2 * (S - 4.0 * I * g) + o1 * (4.0 * I * g + S));
    const cplx lower = r * (I * g + r + gam + I * w / 2.0) / stat_den -
                       dsum * e(-r * t) * (2.0 * I * g + 2 * gam + I * w) * r / tr_den +
                       osc * r * (o1 - e(I * Q * t) * o2);
    return std::make_pair(upper, lower);
  };
  std::tie(m(0, 1), m(2, 3)) = off_diagonal(D3 + D4, OD1, OD2);
  std::tie(m(0, 2), m(1, 3)) = off_diagonal(D3 - D4, OD3, OD4);

  const cplx anti = e(-0.5 * t * (3 * r + 4 * gam + 2.0 * I * w + I * Q));
  m(0, 3) = e(-2 * t * (r + 2 * gam + I * w)) * AD1 +
            (2 * r + 2 * gam + I * w) * r * r /
                (4.0 * (4 * g * g + 2 * r * r + (2 * gam + I * w) * (2 * gam + I * w) +
                        r * (6 * gam + 3.0 * I * w)) *
                 (r + 2 * gam + I * w)) -
            I * e(-r * t) * g * D3 * r * r /
                ((4 * g * g + (2 * gam + I * w) * (r + 2 * gam + I * w)) * (r + 4 * gam + 2.0 * I * w)) +
            anti * r *
                ((4 * g + I * r + Q) * (OD1 + OD3) / (I * r + 4.0 * I * gam - 2 * w + Q) -
                 e(I * Q * t) * (-4 * g - I * r + Q) * (OD2 + OD4) / (-I * r - 4.0 * I * gam + 2 * w + Q));

  // The OD1/OD2 transient enters C0110 through the conjugated pair.
  auto transient = [&](cplx a, cplx b) {
    return anti * r *
           ((4 * g + I * r + Q) * a / (I * r + 4.0 * I * gam + 2 * w + Q) -
            e(I * Q * t) * (-4 * g - I * r + Q) * b / (-I * r - 4.0 * I * gam - 2 * w + Q));
  };
  const double w2 = w * w;
  m(1, 2) = e(t * (-2 * r - 4 * gam)) * AD2 +
            r * r * (8 * (r + gam) * g * g + (r + 2 * gam) * (4 * (r + gam) * (r + gam) + w2)) /
                (4 * (r + 2 * gam) *
                 (w2 * w2 + (-8 * g * g + 5 * r * r + 8 * gam * gam + 12 * r * gam) * w2 +
                  4 * std::pow(2 * g * g + (r + gam) * (r + 2 * gam), 2))) +
            I * e(-r * t) * g *
                (I * (r + 4 * gam) * w * D3 + (4 * g * g - w2 + 2 * gam * (r + 2 * gam)) * D4) * r * r /
                ((r + 4 * gam) * (16 * std::pow(g, 4) + 8 * (2 * gam * (r + 2 * gam) - w2) * g * g +
                                  (4 * gam * gam + w2) * ((r + 2 * gam) * (r + 2 * gam) + w2))) +
            std::conj(transient(OD1, OD2)) + transient(OD3, OD4);

  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) m(i, j) = std::conj(m(j, i));
  }
  return m;
}

ClosedFormSolution fit_appendixA(const AppendixAParams& params, const Matrix& rho0) {
  if (rho0.rows() != 4 || rho0.cols() != 4) throw std::invalid_argument("need a two-qubit state");
  static constexpr int kEntries[9][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {2, 3},
                                         {0, 2}, {1, 3}, {0, 3}, {1, 2}};
  ClosedFormSolution sol{params, {}};
  const Matrix base = appendixA_solution(sol, 0.0);
  // The solution is real-linear (not complex-linear) in the constants.
  Eigen::Matrix<double, 18, 18> a;
  Eigen::Matrix<double, 18, 1> rhs;
  for (int k = 0; k < 18; ++k) {
    ClosedFormSolution unit{params, {}};
    unit.constants[static_cast<std::size_t>(k / 2)] = (k % 2 == 0) ? cplx(1.0) : I;
    const Matrix col = appendixA_solution(unit, 0.0) - base;
    for (int i = 0; i < 9; ++i) {
      const cplx v = col(kEntries[i][0], kEntries[i][1]);
      a(2 * i, k) = v.real();
      a(2 * i + 1, k) = v.imag();
    }
  }
  for (int i = 0; i < 9; ++i) {
    const cplx v = rho0(kEntries[i][0], kEntries[i][1]) - base(kEntries[i][0], kEntries[i][1]);
    rhs(2 * i) = v.real();
    rhs(2 * i + 1) = v.imag();
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 18, 18>> lu(a);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("integration constants are not determined at these parameters");
  }
  const Eigen::Matrix<double, 18, 1> x = lu.solve(rhs);
  for (int k = 0; k < 9; ++k) sol.constants[static_cast<std::size_t>(k)] = cplx(x(2 * k), x(2 * k + 1));
  return sol;
}

Matrix appendixB_steady(double B, double C, double s, double g, double w, double r) {
  Matrix m = Matrix::Zero(4, 4);
  const double br2 = 4 * (B + r) * (B + r);
  m(0, 0) = (r + 2 * B * s) * (r + 2 * B * s) / br2;
  m(1, 1) = (r + 2 * B * (1 - s)) * (r + 2 * B * s) / br2;
  m(2, 2) = m(1, 1);
  m(3, 3) = (r + 2 * B * (1 - s)) * (r + 2 * B * (1 - s)) / br2;

  const cplx den = 4 * (B + r) *
                   (4 * g * g + (C + r + I * w) * (C + 2 * r + I * w) +
                    B * (C + r + 2.0 * I * g * (2 * s - 1) + I * w));
  const cplx c0001 = r * (r + 2 * B * s) * (B + C - 2.0 * I * g + 2 * r + I * w) / den;
  const cplx c1011 = r * (r + 2 * B * (1 - s)) * (B + C + 2.0 * I * g + 2 * r + I * w) / den;
  m(0, 1) = m(0, 2) = c0001;
  m(1, 3) = m(2, 3) = c1011;
  m(0, 3) = r * r *
            (B * B + (C + 2.0 * I * g + 3 * r - 4.0 * I * g * s + I * w) * B +
             r * (C + 2 * r + I * w)) /
            (den * (C + r + I * w));

  const double w2 = w * w;
  const double h = 4 * g * g + (C + r) * (C + 2 * r);
  const double d =
      4 * (B + r) * (C + r) *
      (w2 * w2 + (2 * C * C + 6 * r * C - 8 * g * g + 5 * r * r) * w2 + h * h +
       2 * B * ((C + 2 * r) * w2 + 2 * g * (2 * C + 3 * r) * (2 * s - 1) * w + (C + r) * h) +
       B * B * ((C + r) * (C + r) + std::pow(g * (4 * s - 2) + w, 2)));
  const double nu =
      r * r *
      ((C + r) * B * B * B + ((C + r) * (2 * C + 5 * r) - 16 * g * g * (s - 1) * s) * B * B +
       (C * C * C + 7 * r * C * C + 4 * g * g * C + 14 * r * r * C + 8 * r * r * r + (C + r) * w2 +
        12 * g * g * r - 4 * g * (C + r) * (2 * s - 1) * w) *
           B +
       r * (C + r) * w2 + r * (C + 2 * r) * h);
  m(1, 2) = nu / d;
  fill_lower(m);
  return m;
}

std::vector<std::pair<cplx, int>> spectrum_dephasing_reset(double g, double gamma, double omega,
                                                           double r) {
  const cplx S = std::sqrt(cplx(r * r - 16 * g * g));
  const double a = 3 * r + 4 * gamma;
  return {
      {0.0, 1},
      {-r, 2},
      {-2 * r, 1},
      {-2 * (r + 2 * gamma), 2},
      {-2.0 * (r + 2 * gamma + I * omega), 1},
      {-2.0 * (r + 2 * gamma - I * omega), 1},
      {-0.5 * (a + S + 2.0 * I * omega), 2},
      {-0.5 * (a + S - 2.0 * I * omega), 2},
      {-0.5 * (a - S + 2.0 * I * omega), 2},
      {-0.5 * (a - S - 2.0 * I * omega), 2},
  };
}

}  // namespace resetlb::closed_form
