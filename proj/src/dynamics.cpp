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

#include "quartit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace quartit::dynamics {

namespace {

using Liouvillian = Eigen::Matrix<Complex, 17, 17>;
using StateVector = Eigen::Matrix<Complex, 17, 1>;

int vec_index(int row, int col) { return row + 4 * col; }

StateVector vectorize(const Matrix4& rho) {
  StateVector v;
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) v(vec_index(r, c)) = rho(r, c);
  v(16) = 1.0;
  return v;
}

Matrix4 unvectorize(const StateVector& v) {
  Matrix4 rho;
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) rho(r, c) = v(vec_index(r, c));
  return rho;
}

// Pair Hamiltonian (rabi/2) sigma_x + (detuning/2) sigma_z in the rotating
// frame; the sigma_x part alone reproduces X_nm(rabi * t).
Matrix4 drive_hamiltonian(const LevelPair& pair, double rabi, double detuning) {
  Matrix4 h = Matrix4::Zero();
  const int n = pair.lower();
  const int m = pair.upper();
  h(n, m) = h(m, n) = 0.5 * rabi;
  h(n, n) = 0.5 * detuning;
  h(m, m) = -0.5 * detuning;
  return h;
}

Liouvillian generator(const Matrix4& h, const LevelPair& pair, const RelaxationParams& relax,
                      const Matrix4& rho0) {
  Liouvillian l = Liouvillian::Zero();
  const Complex minus_i(0.0, -1.0);
  // vec(H rho) = (1 kron H) vec(rho), vec(rho H) = (H^T kron 1) vec(rho).
  for (int c = 0; c < 4; ++c) {
    for (int r = 0; r < 4; ++r) {
      const int row = vec_index(r, c);
      for (int k = 0; k < 4; ++k) {
        l(row, vec_index(k, c)) += minus_i * h(r, k);
        l(row, vec_index(r, k)) -= minus_i * h(k, c);
      }
    }
  }
  const int n = pair.lower();
  const int m = pair.upper();
  const double gamma_t = relax.transverse_rate();
  const double gamma_1 = 1.0 / relax.t1;
  l(vec_index(n, m), vec_index(n, m)) -= gamma_t;
  l(vec_index(m, n), vec_index(m, n)) -= gamma_t;
  for (int level : {n, m}) {
    l(vec_index(level, level), vec_index(level, level)) -= gamma_1;
    l(vec_index(level, level), 16) += gamma_1 * rho0(level, level).real();
  }
  return l;
}

Sample make_sample(double t, const Matrix4& rho, double mz0, double k_rxx) {
  Sample s;
  s.t = t;
  double mz = 0.0, trace = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double p = rho(i, i).real();
    s.populations[static_cast<std::size_t>(i)] = p;
    mz += spin_projection(i) * p;
    trace += p;
  }
  s.mz = mz;
  s.trace = trace;
  s.delta_rxx = k_rxx * (mz - mz0);
  return s;
}

Matrix4 embed_pair(const LevelPair& pair, const Eigen::Matrix2cd& block) {
  Matrix4 u = Matrix4::Identity();
  const int idx[2] = {pair.lower(), pair.upper()};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) u(idx[i], idx[j]) = block(i, j);
  return u;
}

}  // namespace

void SpectrumParams::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("omega0 must be positive");
  if (!(delta_q >= 0.0) || !std::isfinite(delta_q)) {
    throw std::invalid_argument("delta_q must be non-negative");
  }
  if (!std::isfinite(k_rxx)) throw std::invalid_argument("k_rxx must be finite");
}

void RelaxationParams::validate() const {
  if (!(t1 > 0.0)) throw std::invalid_argument("t1 must be positive");
  if (!(t2 > 0.0)) throw std::invalid_argument("t2 must be positive");
  if (t2 > 2.0 * t1) throw std::invalid_argument("t2 must not exceed 2 t1");
}

std::vector<Transition> transition_table(const SpectrumParams& params) {
  params.validate();
  const double w0 = params.omega0;
  const double dq = params.lower_first ? params.delta_q : -params.delta_q;
  return {
      {LevelPair(0, 1), 1, w0 - 2.0 * dq}, {LevelPair(1, 2), 1, w0},
      {LevelPair(2, 3), 1, w0 + 2.0 * dq}, {LevelPair(0, 2), 2, w0 - dq},
      {LevelPair(1, 3), 2, w0 + dq},       {LevelPair(0, 3), 3, w0},
  };
}

InitialPopulations::InitialPopulations(const std::array<double, 4>& p) : p_(p) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("populations must be non-negative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("populations must sum to 1");
}

TimeSeries rabi_trace(const DensityMatrix& rho0, const Drive& drive, const RelaxationParams& relax,
                      double duration, double dt, double k_rxx) {
  relax.validate();
  if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("duration must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!std::isfinite(drive.rabi_omega) || drive.rabi_omega < 0.0) {
    throw std::invalid_argument("rabi_omega must be finite and non-negative");
  }
  const double generalized = std::hypot(drive.rabi_omega, drive.detuning);
  if (generalized > 0.0 && !(dt < 0.1 * (2.0 * std::numbers::pi / generalized))) {
    std::ostringstream os;
    os << "dt too coarse: need dt < " << 0.1 * (2.0 * std::numbers::pi / generalized) << " s";
    throw std::invalid_argument(os.str());
  }

  const auto steps = static_cast<long>(std::ceil(duration / dt - 1e-9));
  const double h = duration / static_cast<double>(steps);
  const Liouvillian l =
      generator(drive_hamiltonian(drive.pair, drive.rabi_omega, drive.detuning), drive.pair, relax,
                rho0.matrix());
  const Liouvillian propagator = (l * h).exp();

  TimeSeries series;
  series.samples.reserve(static_cast<std::size_t>(steps) + 1);
  const double mz0 = mz(rho0);
  StateVector v = vectorize(rho0.matrix());
  series.samples.push_back(make_sample(0.0, rho0.matrix(), mz0, k_rxx));
  for (long k = 1; k <= steps; ++k) {
    v = propagator * v;
    series.samples.push_back(make_sample(k * h, unvectorize(v), mz0, k_rxx));
  }
  Matrix4 rho = unvectorize(v);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  series.final_state = DensityMatrix(rho);
  return series;
}

PreparationResult prepare_effective_pure(const InitialPopulations& pops, int bit_a, int bit_b) {
  const auto target = LogicalEncoding::from_bits(bit_a, bit_b);
  std::vector<Pulse> pulses = {X(1, 2, std::numbers::pi), X(0, 1, std::numbers::pi / 2)};
  if (target.index != 3) pulses.push_back(X(target.index, 3, std::numbers::pi));

  PreparationResult result;
  result.sequence = PulseSequence(pulses);
  DensityMatrix rho = pops.density();
  result.population_steps.push_back(rho.populations());
  for (const auto& pulse : pulses) {
    rho = apply(pulse_unitary(pulse), rho);
    result.population_steps.push_back(rho.populations());
  }
  result.coherent_rho = rho;
  result.rho = DensityMatrix::from_populations(rho.populations());

  const auto p = result.rho.populations();
  double background = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (i != target.index) background += p[static_cast<std::size_t>(i)] / 3.0;
  }
  double spread = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (i != target.index) spread = std::max(spread, std::abs(p[static_cast<std::size_t>(i)] - background));
  }
  result.epsilon = p[static_cast<std::size_t>(target.index)] - background;
  result.deviation = spread;
  result.decomposition_holds = spread <= 1e-12;
  result.polarized = std::abs(result.epsilon) > 1e-12;
  return result;
}

double delta_rxx(const DensityMatrix& before, const DensityMatrix& after, const SpectrumParams& params) {
  return params.k_rxx * (mz(after) - mz(before));
}

std::vector<double> default_grid(const SpectrumParams& params, int points, double margin) {
  params.validate();
  if (points < 2) throw std::invalid_argument("grid needs at least two points");
  const double half = std::max(3.0 * params.delta_q, margin);
  if (!(half > 0.0)) throw std::invalid_argument("grid half-width must be positive");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = params.omega0 - half + 2.0 * half * i / (points - 1);
  }
  return grid;
}

std::vector<SpectrumPoint> spectrum_sweep(const DensityMatrix& rho0, const SpectrumParams& params,
                                          double rabi_omega, double pulse_length,
                                          const std::vector<double>& grid) {
  params.validate();
  if (!(rabi_omega > 0.0)) throw std::invalid_argument("rabi_omega must be positive");
  if (!(pulse_length > 0.0)) throw std::invalid_argument("pulse length must be positive");
  if (grid.empty()) throw std::invalid_argument("empty frequency grid");
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  const double span = 3.0 * params.delta_q;
  const double slack = 1e-9 * params.omega0;
  if (*lo > params.omega0 - span + slack || *hi < params.omega0 + span - slack) {
    throw std::invalid_argument("frequency grid must cover omega0 +- 3 delta_q");
  }

  std::vector<Transition> one_photon;
  for (const auto& t : transition_table(params)) {
    if (t.photon_number == 1) one_photon.push_back(t);
  }

  std::vector<SpectrumPoint> out;
  out.reserve(grid.size());
  for (double w : grid) {
    const Transition* nearest = &one_photon.front();
    for (const auto& t : one_photon) {
      if (std::abs(w - t.frequency) < std::abs(w - nearest->frequency)) nearest = &t;
    }
    const double detuning = w - nearest->frequency;
    Eigen::Matrix2cd generator;
    generator << 0.5 * detuning, 0.5 * rabi_omega, 0.5 * rabi_omega, -0.5 * detuning;
    const Eigen::Matrix2cd block = (Complex(0.0, -pulse_length) * generator).exp();
    const UnitaryOperator u(embed_pair(nearest->pair, block));
    const DensityMatrix after = apply(u, rho0);
    out.push_back({w, mz(after), delta_rxx(rho0, after, params)});
  }
  return out;
}

std::vector<std::size_t> local_maxima(const std::vector<SpectrumPoint>& spectrum) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < spectrum.size(); ++i) {
    if (spectrum[i].delta_rxx > spectrum[i - 1].delta_rxx &&
        spectrum[i].delta_rxx >= spectrum[i + 1].delta_rxx) {
      peaks.push_back(i);
    }
  }
  return peaks;
}

}  // namespace quartit::dynamics
