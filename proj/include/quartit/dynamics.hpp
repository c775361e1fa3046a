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

#pragma once

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "quartit/core.hpp"
#include "quartit/pulse.hpp"

namespace quartit::dynamics {

// Angular frequencies in rad/s. delta_q is stored as Delta_q / hbar.
struct SpectrumParams {
  double omega0 = 2.0 * std::numbers::pi * 40e6;
  double delta_q = 2.0 * std::numbers::pi * 12.5e3;
  // Resistance change per unit change of Mz (ohm per hbar).
  double k_rxx = 1.0;
  // (0,1) is the lower one-photon line when true; false mirrors the table.
  bool lower_first = true;

  void validate() const;
};

struct RelaxationParams {
  double t1 = 100.0;
  // Decay time of the driven-oscillation envelope.
  double t2 = 0.6e-3;

  void validate() const;
  // Transverse damping rate of the driven pair, 2/t2 - 1/t1, which makes the
  // resonant Rabi envelope decay as exp(-t/t2).
  double transverse_rate() const { return 2.0 / t2 - 1.0 / t1; }
};

inline constexpr double kDefaultRabiOmega = 2.0 * std::numbers::pi * 10e3;

struct Transition {
  LevelPair pair;
  int photon_number;
  double frequency;
};

std::vector<Transition> transition_table(const SpectrumParams& params);

class InitialPopulations {
 public:
  InitialPopulations() : p_{0.1, 0.2, 0.3, 0.4} {}
  explicit InitialPopulations(const std::array<double, 4>& p);

  const std::array<double, 4>& values() const { return p_; }
  double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
  DensityMatrix density() const { return DensityMatrix::from_populations(p_); }

 private:
  std::array<double, 4> p_;
};

struct Drive {
  LevelPair pair{2, 3};
  double rabi_omega = kDefaultRabiOmega;
  double detuning = 0.0;
};

struct Sample {
  double t = 0.0;
  double mz = 0.0;
  double delta_rxx = 0.0;
  std::array<double, 4> populations{};
  double trace = 1.0;
};

struct TimeSeries {
  std::vector<Sample> samples;
  DensityMatrix final_state = DensityMatrix::maximally_mixed();
};

// Rotating-frame two-level dynamics on the driven pair with transverse
// damping and T1 relaxation of the pair populations toward their values in
// rho0. Spectator populations are frozen. Sampled every step of at most dt,
// with the last sample exactly at `duration`.
TimeSeries rabi_trace(const DensityMatrix& rho0, const Drive& drive, const RelaxationParams& relax,
                      double duration, double dt, double k_rxx = 1.0);

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& message, double rms_residual)
      : std::runtime_error(message), rms_residual_(rms_residual) {}
  double rms_residual() const { return rms_residual_; }

 private:
  double rms_residual_;
};

struct DecayFit {
  double t2_estimate = 0.0;     // infinity when no decay is present
  double rabi_estimate = 0.0;   // rad/s
  double amplitude = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
  bool decay_resolved = true;   // false when t2_estimate >= 100 x duration
  int iterations = 0;
};

// Least-squares fit of A cos(W t + phi) exp(-t/T2) + B, seeded from a
// periodogram and a decay-rate grid, refined with Levenberg-Marquardt.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y);
DecayFit fit_decay(const TimeSeries& series);

struct PreparationResult {
  PulseSequence sequence;
  // Populations after the sequence with coherences dephased.
  DensityMatrix rho = DensityMatrix::maximally_mixed();
  // State right after the pulses, before dephasing.
  DensityMatrix coherent_rho = DensityMatrix::maximally_mixed();
  // Populations before the first pulse and after each pulse.
  std::vector<std::array<double, 4>> population_steps;
  double epsilon = 0.0;
  // Spread of the three background populations around their mean.
  double deviation = 0.0;
  bool decomposition_holds = false;
  bool polarized = false;
};

// X_12(pi) then X_01(pi/2) leaves |11> as the effective pure state of a
// linear population ladder; X_{2a+b,3}(pi) then moves it to |ab>.
PreparationResult prepare_effective_pure(const InitialPopulations& pops, int bit_a, int bit_b);

double delta_rxx(const DensityMatrix& before, const DensityMatrix& after, const SpectrumParams& params);

struct SpectrumPoint {
  double frequency = 0.0;
  double mz = 0.0;  // after the pulse
  double delta_rxx = 0.0;
};

// Linear grid of `points` frequencies over [omega0 - 3 dq, omega0 + 3 dq],
// widened to +-margin when delta_q is zero.
std::vector<double> default_grid(const SpectrumParams& params, int points, double margin = 0.0);

// Single rf pulse of the given length at each grid frequency, resonant with
// the nearest one-photon transition up to the detuning.
std::vector<SpectrumPoint> spectrum_sweep(const DensityMatrix& rho0, const SpectrumParams& params,
                                          double rabi_omega, double pulse_length,
                                          const std::vector<double>& grid);

// Interior indices i with y[i-1] < y[i] >= y[i+1].
std::vector<std::size_t> local_maxima(const std::vector<SpectrumPoint>& spectrum);

}  // namespace quartit::dynamics
