// Copyright 2026 The quartit Authors
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

// Reference computations used only by the tests. Nothing here calls into the
// library, so a shared bug cannot hide behind agreement.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;
using V4 = Eigen::Vector4cd;

inline constexpr double kPi = 3.14159265358979323846;

// exp(A) by scaling and squaring on a truncated Taylor series.
template <typename M>
M taylor_exp(const M& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  const M scaled = a / std::pow(2.0, squarings);
  M term = M::Identity(a.rows(), a.cols());
  M sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline M2 pauli(char axis) {
  M2 s;
  switch (axis) {
    case 'X': s << 0, 1, 1, 0; break;
    case 'Y': s << 0, C(0, -1), C(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

// exp(-i theta/2 sigma) in the (n,m) subspace with |n> as the first component.
inline M2 two_level_rotation(char axis, double theta) {
  return taylor_exp<M2>(C(0, -theta / 2.0) * pauli(axis));
}

struct Step {
  char axis;   // 'X', 'Y', 'Z'
  int n = -1;  // -1 marks a hard pulse
  int m = -1;
  double theta;
};

// Pushes one basis vector through the pulses in time order, touching only
// the two amplitudes each selective pulse couples.
inline V4 track(V4 v, const std::vector<Step>& steps);

// Collective rotation of three spin-1/2 restricted to the symmetric
// subspace, which carries the spin-3/2 representation.
inline M4 symmetric_hard_pulse(char axis, double theta);

inline V4 track(V4 v, const std::vector<Step>& steps) {
  for (const auto& s : steps) {
    if (s.n < 0) {
      v = symmetric_hard_pulse(s.axis, s.theta) * v;
      continue;
    }
    const M2 r = two_level_rotation(s.axis, s.theta);
    const C a = v(s.n), b = v(s.m);
    v(s.n) = r(0, 0) * a + r(0, 1) * b;
    v(s.m) = r(1, 0) * a + r(1, 1) * b;
  }
  return v;
}

inline M4 tracked_unitary(const std::vector<Step>& steps, C prefactor = 1.0) {
  M4 u;
  for (int k = 0; k < 4; ++k) u.col(k) = prefactor * track(V4::Unit(k), steps);
  return u;
}

// Columns: Dicke states with k spins down, k = 0..3, i.e. m = 3/2 - k.
inline Eigen::Matrix<C, 8, 4> dicke_embedding() {
  Eigen::Matrix<C, 8, 4> d = Eigen::Matrix<C, 8, 4>::Zero();
  for (int state = 0; state < 8; ++state) {
    int downs = 0;
    for (int bit = 0; bit < 3; ++bit) downs += (state >> bit) & 1;
    d(state, downs) = 1.0;
  }
  for (int k = 0; k < 4; ++k) d.col(k).normalize();
  return d;
}

inline Eigen::Matrix<C, 8, 8> kron3(const M2& a) {
  Eigen::Matrix<C, 8, 8> out;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      out(r, c) = a((r >> 2) & 1, (c >> 2) & 1) * a((r >> 1) & 1, (c >> 1) & 1) * a(r & 1, c & 1);
  return out;
}

inline M4 symmetric_hard_pulse(char axis, double theta) {
  const auto d = dicke_embedding();
  return d.adjoint() * kron3(two_level_rotation(axis, theta)) * d;
}

// Collective spin component sum_k sigma_k / 2 on the symmetric subspace.
inline M4 symmetric_spin(char axis) {
  const auto d = dicke_embedding();
  const M2 s = pauli(axis) / 2.0;
  const M2 one = M2::Identity();
  Eigen::Matrix<C, 8, 8> total = Eigen::Matrix<C, 8, 8>::Zero();
  for (int slot = 0; slot < 3; ++slot) {
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) {
        C v = 1.0;
        for (int bit = 0; bit < 3; ++bit) {
          const M2& f = (bit == slot) ? s : one;
          v *= f((r >> (2 - bit)) & 1, (c >> (2 - bit)) & 1);
        }
        total(r, c) += v;
      }
  }
  return d.adjoint() * total * d;
}

// Euclidean projection onto the probability simplex by exhaustive search
// over supports: on a support S the minimizer shifts every entry equally.
inline std::array<double, 4> simplex_projection(const std::array<double, 4>& x) {
  std::array<double, 4> best{};
  double best_distance = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < 16; ++mask) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1) {
        sum += x[i];
        ++count;
      }
    const double shift = (1.0 - sum) / count;
    std::array<double, 4> p{};
    bool feasible = true;
    for (int i = 0; i < 4; ++i) {
      if (mask >> i & 1) {
        p[i] = x[i] + shift;
        if (p[i] < -1e-15) feasible = false;
      }
    }
    if (!feasible) continue;
    double distance = 0.0;
    for (int i = 0; i < 4; ++i) distance += (p[i] - x[i]) * (p[i] - x[i]);
    if (distance < best_distance) {
      best_distance = distance;
      best = p;
    }
  }
  return best;
}

// Haar-random unitary via QR of a complex Ginibre matrix with phase fixing.
inline M4 haar_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  M4 g;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = C(normal(rng), normal(rng));
  Eigen::HouseholderQR<M4> qr(g);
  M4 q = qr.householderQ();
  const M4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 4; ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
  return q;
}

// Upper-level population after a rectangular detuned pulse from the lower level.
inline double generalized_rabi(double rabi, double detuning, double t) {
  const double w = std::sqrt(rabi * rabi + detuning * detuning);
  const double s = std::sin(w * t / 2.0);
  return rabi * rabi / (w * w) * s * s;
}

// Resonant two-level Bloch equations for populations (pn, pm) and coherence
// c = rho_nm, integrated with classical RK4.
struct BlochState {
  double pn, pm;
  C c;
};

inline BlochState bloch_rk4(BlochState s, double rabi, double gamma_t, double gamma_1, double pn0, double pm0,
                            double duration, int steps) {
  auto deriv = [&](const BlochState& x) {
    // H = rabi/2 (|n><m| + |m><n|)
    const C i(0, 1);
    BlochState d;
    const C drive = -i * (rabi / 2.0);
    d.pn = (drive * (std::conj(x.c) - x.c)).real() - gamma_1 * (x.pn - pn0);
    d.pm = (drive * (x.c - std::conj(x.c))).real() - gamma_1 * (x.pm - pm0);
    d.c = drive * (x.pm - x.pn) - gamma_t * x.c;
    return d;
  };
  auto axpy = [](const BlochState& x, double h, const BlochState& k) {
    return BlochState{x.pn + h * k.pn, x.pm + h * k.pm, x.c + h * k.c};
  };
  const double h = duration / steps;
  for (int k = 0; k < steps; ++k) {
    const auto k1 = deriv(s);
    const auto k2 = deriv(axpy(s, h / 2, k1));
    const auto k3 = deriv(axpy(s, h / 2, k2));
    const auto k4 = deriv(axpy(s, h, k3));
    s.pn += h / 6 * (k1.pn + 2 * k2.pn + 2 * k3.pn + k4.pn);
    s.pm += h / 6 * (k1.pm + 2 * k2.pm + 2 * k3.pm + k4.pm);
    s.c += h / 6 * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c);
  }
  return s;
}

inline double damped_cosine(double t, double a, double omega, double phi, double t2, double b) {
  return a * std::cos(omega * t + phi) * std::exp(-t / t2) + b;
}

inline double max_abs(const M4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
