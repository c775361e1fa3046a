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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "quartit/dynamics.hpp"

using namespace quartit;
using namespace quartit::dynamics;

namespace {

constexpr double kPi = oracle::kPi;
constexpr double kTwoPi = 2 * kPi;

std::vector<double> one_photon_frequencies(const SpectrumParams& p) {
  std::vector<double> f;
  for (const auto& t : transition_table(p))
    if (t.photon_number == 1) f.push_back(t.frequency);
  return f;
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW(SpectrumParams{}.validate());
  EXPECT_THROW((SpectrumParams{0.0, 1.0, 1.0, true}.validate()), std::invalid_argument);
  EXPECT_THROW((SpectrumParams{1.0, -1.0, 1.0, true}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((RelaxationParams{1.0, 2.0}.validate()));
  EXPECT_THROW((RelaxationParams{1.0, 2.5}.validate()), std::invalid_argument);
  EXPECT_THROW((RelaxationParams{0.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((RelaxationParams{1.0, -1.0}.validate()), std::invalid_argument);
  EXPECT_THROW(InitialPopulations({0.5, 0.5, 0.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(InitialPopulations({0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST(TransitionTable, DefaultsAndSymmetry) {
  const auto table = transition_table(SpectrumParams{});
  ASSERT_EQ(table.size(), 6u);
  EXPECT_NEAR(table[0].frequency / kTwoPi, 39.975e6, 1e-6);
  EXPECT_NEAR(table[2].frequency / kTwoPi, 40.025e6, 1e-6);
  for (const auto& t : table) EXPECT_EQ(t.photon_number, t.pair.upper() - t.pair.lower());

  for (double dq : {0.0, 1.0, 1e4, 7e5}) {
    SpectrumParams p;
    p.delta_q = dq;
    const auto tt = transition_table(p);
    EXPECT_EQ(tt[5].pair, LevelPair(0, 3));
    EXPECT_EQ(tt[5].frequency, tt[1].frequency);
    if (dq == 0.0)
      for (const auto& t : tt) EXPECT_EQ(t.frequency, p.omega0);
  }
  SpectrumParams mirrored;
  mirrored.lower_first = false;
  EXPECT_GT(transition_table(mirrored)[0].frequency, mirrored.omega0);
}

TEST(Rabi, UndrivenMzIsConstant) {
  const auto rho = InitialPopulations{}.density();
  const auto series = rabi_trace(rho, Drive{LevelPair(2, 3), 0.0, 0.0}, RelaxationParams{}, 1e-3, 1e-5);
  for (const auto& s : series.samples) EXPECT_NEAR(s.mz, -0.5, 1e-12);
}

TEST(Rabi, IdealPiPulseTransfersPopulation) {
  const double omega = kDefaultRabiOmega;
  const RelaxationParams ideal{1e9, 1e9};
  const auto rho = DensityMatrix::from_populations({0, 0, 1, 0});
  const auto series = rabi_trace(rho, Drive{LevelPair(2, 3), omega, 0.0}, ideal, kPi / omega, 1e-7);
  EXPECT_NEAR(series.samples.back().t, kPi / omega, 1e-15);
  EXPECT_NEAR(series.final_state(3, 3).real(), 1.0, 1e-6);
}

TEST(Rabi, IdealLimitMatchesPulseUnitary) {
  const double omega = kDefaultRabiOmega;
  const RelaxationParams ideal{1e9, 1e9};
  const auto rho = InitialPopulations{}.density();
  for (const auto& pair : all_transitions()) {
    const auto series = rabi_trace(rho, Drive{pair, omega, 0.0}, ideal, kPi / omega, 1e-7);
    const auto expected = apply(pulse_unitary(X(pair.lower(), pair.upper(), kPi)), rho).populations();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(series.samples.back().populations[k], expected[k], 1e-6);
  }
}

TEST(Rabi, MatchesBlochIntegrator) {
  const double omega = kTwoPi * 3e3;
  const RelaxationParams relax{2e-3, 0.8e-3};
  const auto pops = InitialPopulations{};
  const auto series = rabi_trace(pops.density(), Drive{LevelPair(1, 2), omega, 0.0}, relax, 2e-3, 1e-5);
  const auto reference = oracle::bloch_rk4({0.2, 0.3, 0.0}, omega, relax.transverse_rate(), 1.0 / relax.t1, 0.2,
                                           0.3, 2e-3, 20000);
  EXPECT_NEAR(series.samples.back().populations[1], reference.pn, 1e-9);
  EXPECT_NEAR(series.samples.back().populations[2], reference.pm, 1e-9);
  EXPECT_NEAR(series.samples.back().populations[0], 0.1, 1e-12);
  EXPECT_NEAR(series.samples.back().populations[3], 0.4, 1e-12);
}

TEST(Rabi, ConservesTraceAndReportsDeltaRxx) {
  const auto rho = InitialPopulations{}.density();
  const auto series = rabi_trace(rho, Drive{}, RelaxationParams{}, 3e-3, 1e-6, 2.5);
  ASSERT_EQ(series.samples.size(), 3001u);
  const double mz0 = series.samples.front().mz;
  for (const auto& s : series.samples) {
    EXPECT_NEAR(s.trace, 1.0, 1e-9);
    EXPECT_NEAR(s.delta_rxx, 2.5 * (s.mz - mz0), 1e-12);
  }
}

TEST(Rabi, RejectsCoarseStepsAndBadInput) {
  const auto rho = InitialPopulations{}.density();
  const double omega = kDefaultRabiOmega;
  const double period = kTwoPi / omega;
  EXPECT_THROW(rabi_trace(rho, Drive{LevelPair(2, 3), omega, 0}, RelaxationParams{}, 1e-3, 0.1 * period),
               std::invalid_argument);
  EXPECT_NO_THROW(rabi_trace(rho, Drive{LevelPair(2, 3), omega, 0}, RelaxationParams{}, 1e-3, 0.099 * period));
  EXPECT_THROW(rabi_trace(rho, Drive{}, RelaxationParams{}, 0.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(rabi_trace(rho, Drive{}, RelaxationParams{}, 1e-3, -1e-6), std::invalid_argument);
  EXPECT_THROW(rabi_trace(rho, Drive{}, RelaxationParams{1.0, 3.0}, 1e-3, 1e-6), std::invalid_argument);
}

TEST(Rabi, EnvelopeDecaysByOneOverEAtT2) {
  for (double t2 : {0.6e-3, 1.5e-3}) {
    const auto series = rabi_trace(InitialPopulations{}.density(), Drive{}, RelaxationParams{100.0, t2}, 5 * t2,
                                   5e-7);
    // Peak-to-peak of Mz around t and around zero, one Rabi period wide.
    auto swing = [&](double center) {
      double lo = 1e9, hi = -1e9;
      for (const auto& s : series.samples)
        if (std::abs(s.t - center) <= 0.5 / 10e3) lo = std::min(lo, s.mz), hi = std::max(hi, s.mz);
      return hi - lo;
    };
    const double start = swing(0.5 / 10e3);
    const double later = swing(t2 + 0.5 / 10e3);
    EXPECT_NEAR(later / start, std::exp(-1.0), 0.02 * std::exp(-1.0));
  }
}

TEST(Fit, RecoversOwnModelAcrossRandomDraws) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> rabi_hz(2e3, 20e3), t2(0.3e-3, 3e-3), phase(-kPi, kPi);
  for (int draw = 0; draw < 50; ++draw) {
    const double w = kTwoPi * rabi_hz(rng), tau = t2(rng), phi = phase(rng);
    const double duration = std::max(3.0 * tau, 4.0 * kTwoPi / w);
    const int n = 2000;
    std::vector<double> t(n), y(n);
    for (int k = 0; k < n; ++k) {
      t[k] = duration * k / (n - 1);
      y[k] = oracle::damped_cosine(t[k], 0.3, w, phi, tau, -0.2);
    }
    const auto fit = fit_decay(t, y);
    EXPECT_NEAR(fit.t2_estimate, tau, 0.02 * tau) << "draw " << draw;
    EXPECT_NEAR(fit.rabi_estimate, w, 0.02 * w) << "draw " << draw;
    EXPECT_NEAR(fit.offset, -0.2, 1e-6);
    EXPECT_LT(fit.rms_residual, 1e-8);
  }
}

TEST(Fit, SyntheticT2Values) {
  for (double tau : {0.6e-3, 1.5e-3}) {
    std::vector<double> t, y;
    for (int k = 0; k <= 3000; ++k) {
      t.push_back(k * 1e-6);
      y.push_back(oracle::damped_cosine(t.back(), 0.05, kTwoPi * 10e3, 0.0, tau, -0.45));
    }
    EXPECT_NEAR(fit_decay(t, y).t2_estimate, tau, 0.02 * tau);
  }
}

TEST(Fit, UndampedCosineFlagsNoDecay) {
  std::vector<double> t, y;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(k * 1e-6);
    y.push_back(0.4 * std::cos(kTwoPi * 5e3 * t.back() + 0.3) + 0.1);
  }
  const auto fit = fit_decay(t, y);
  EXPECT_FALSE(fit.decay_resolved);
  EXPECT_GE(fit.t2_estimate, 100 * 2e-3);
  EXPECT_NEAR(fit.rabi_estimate, kTwoPi * 5e3, 1e-3 * kTwoPi * 5e3);
}

TEST(Fit, RejectsShortOrInvalidSeries) {
  std::vector<double> t, y;
  for (int k = 0; k < 100; ++k) {
    t.push_back(k * 1e-6);
    y.push_back(std::cos(kTwoPi * 10e3 * t.back()));
  }
  // About one period only.
  EXPECT_THROW(fit_decay(t, y), std::invalid_argument);
  EXPECT_THROW(fit_decay(std::vector<double>{0, 1}, std::vector<double>{0, 1}), std::invalid_argument);
  EXPECT_THROW(fit_decay(std::vector<double>(20, 0.0), std::vector<double>(19, 0.0)), std::invalid_argument);
}

TEST(Fit, NoisyDataIsStillClose) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<double> t, y;
  for (int k = 0; k <= 3000; ++k) {
    t.push_back(k * 1e-6);
    y.push_back(oracle::damped_cosine(t.back(), 0.05, kTwoPi * 10e3, 0.4, 0.6e-3, -0.45) + noise(rng));
  }
  const auto fit = fit_decay(t, y);
  EXPECT_NEAR(fit.t2_estimate, 0.6e-3, 0.05 * 0.6e-3);
  EXPECT_NEAR(fit.rms_residual, 1e-3, 2e-4);
}

TEST(Rabi, TraceFitRecoversT2) {
  for (double t2 : {0.6e-3, 1.5e-3}) {
    const auto series = rabi_trace(InitialPopulations{}.density(), Drive{}, RelaxationParams{100.0, t2}, 5 * t2,
                                   1e-6);
    const auto fit = fit_decay(series);
    EXPECT_NEAR(fit.t2_estimate, t2, 0.02 * t2);
    // Damping lowers the oscillation frequency to sqrt(W^2 - 1/t2^2).
    const double w = kDefaultRabiOmega;
    EXPECT_NEAR(fit.rabi_estimate, std::sqrt(w * w - 1.0 / (t2 * t2)), 1e-6 * w);
  }
}

TEST(Prepare, ElevenRecipe) {
  const auto r = prepare_effective_pure(InitialPopulations{}, 1, 1);
  ASSERT_EQ(r.sequence.size(), 2u);
  EXPECT_EQ(r.sequence.pulses()[0], X(1, 2, kPi));
  EXPECT_EQ(r.sequence.pulses()[1], X(0, 1, kPi / 2));
  const auto p = r.rho.populations();
  const std::array<double, 4> expected{0.2, 0.2, 0.2, 0.4};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(p[k], expected[k], 1e-12);
  EXPECT_NEAR(r.epsilon, 0.2, 1e-12);
  EXPECT_TRUE(r.decomposition_holds);
  EXPECT_TRUE(r.polarized);
  // (1 - eps)/4 + eps on the target and (1 - eps)/4 elsewhere.
  const Matrix4 model = (1 - r.epsilon) / 4 * Matrix4::Identity() +
                        r.epsilon * DensityMatrix::from_populations({0, 0, 0, 1}).matrix();
  EXPECT_LT(oracle::max_abs(r.rho.matrix() - model), 1e-12);
  EXPECT_EQ(r.population_steps.size(), 3u);
}

TEST(Prepare, EveryTargetReceivesTheLargestPopulation) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int target = 2 * a + b;
      const auto r = prepare_effective_pure(InitialPopulations{}, a, b);
      EXPECT_EQ(r.sequence.size(), target == 3 ? 2u : 3u);
      if (target != 3) EXPECT_EQ(r.sequence.pulses()[2], X(target, 3, kPi));
      const auto p = r.rho.populations();
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(p[k], k == target ? 0.4 : 0.2, 1e-12) << a << b << k;
      EXPECT_NEAR(r.epsilon, 0.2, 1e-12);
    }
  const auto p00 = prepare_effective_pure(InitialPopulations{}, 0, 0).rho.populations();
  EXPECT_NEAR(p00[0], 0.4, 1e-12);
  EXPECT_THROW(prepare_effective_pure(InitialPopulations{}, 2, 0), std::invalid_argument);
}

TEST(Prepare, MaximallyMixedHasNoPolarization) {
  const auto r = prepare_effective_pure(InitialPopulations({0.25, 0.25, 0.25, 0.25}), 1, 1);
  EXPECT_NEAR(r.epsilon, 0.0, 1e-15);
  EXPECT_FALSE(r.polarized);
}

TEST(Prepare, LinearLaddersGiveEffectivePureStates) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> slope(-1.0 / 6, 1.0 / 6);
  for (int trial = 0; trial < 200; ++trial) {
    const double b = slope(rng);
    const double a = 0.25 - 1.5 * b;
    const std::array<double, 4> p{a, a + b, a + 2 * b, a + 3 * b};
    const auto r = prepare_effective_pure(InitialPopulations(p), trial % 2, (trial / 2) % 2);
    EXPECT_LT(r.deviation, 1e-12);
    EXPECT_TRUE(r.decomposition_holds);
    EXPECT_NEAR(r.epsilon, 2 * b, 1e-12);
  }
}

TEST(Prepare, OutputIsPermutationAndAverageOfInput) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 4> p{};
    double s = 0;
    for (auto& v : p) s += (v = u(rng));
    for (auto& v : p) v /= s;
    const auto r = prepare_effective_pure(InitialPopulations(p), 1, 1);
    const auto q = r.rho.populations();
    // X12(pi) swaps p1,p2; X01(pi/2) then averages levels 0 and 1.
    EXPECT_NEAR(q[0], 0.5 * (p[0] + p[2]), 1e-15);
    EXPECT_NEAR(q[1], 0.5 * (p[0] + p[2]), 1e-15);
    EXPECT_NEAR(q[2], p[1], 1e-15);
    EXPECT_NEAR(q[3], p[3], 1e-15);
    EXPECT_NEAR(q[0] + q[1] + q[2] + q[3], 1.0, 1e-15);
  }
}

TEST(DeltaRxx, Examples) {
  SpectrumParams p;
  const auto three = DensityMatrix::from_populations({0, 0, 0, 1});
  const auto zero = DensityMatrix::from_populations({1, 0, 0, 0});
  EXPECT_EQ(delta_rxx(three, three, p), 0.0);
  EXPECT_NEAR(delta_rxx(three, zero, p), 3.0, 1e-15);
  p.k_rxx = -2.5;
  EXPECT_NEAR(delta_rxx(three, zero, p), -7.5, 1e-15);
}

TEST(Spectrum, ThreePeaksAtOnePhotonLines) {
  const SpectrumParams params;
  const auto grid = default_grid(params, 601);
  EXPECT_LE(grid.front(), params.omega0 - 3 * params.delta_q);
  EXPECT_GE(grid.back(), params.omega0 + 3 * params.delta_q);
  const double omega = kDefaultRabiOmega;
  const auto spectrum = spectrum_sweep(InitialPopulations{}.density(), params, omega, kPi / omega, grid);
  const auto peaks = local_maxima(spectrum);
  ASSERT_EQ(peaks.size(), 3u);
  const double step = grid[1] - grid[0];
  const auto lines = one_photon_frequencies(params);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(std::abs(spectrum[peaks[k]].frequency - lines[k]), step);
}

TEST(Spectrum, LineshapeMatchesGeneralizedRabi) {
  const SpectrumParams params;
  const double omega = kDefaultRabiOmega, tau = kPi / omega;
  const auto grid = default_grid(params, 301);
  const auto rho = InitialPopulations{}.density();
  const auto spectrum = spectrum_sweep(rho, params, omega, tau, grid);
  const auto lines = one_photon_frequencies(params);
  const double pops[4] = {0.1, 0.2, 0.3, 0.4};
  for (const auto& s : spectrum) {
    std::size_t nearest = 0;
    for (std::size_t k = 1; k < 3; ++k)
      if (std::abs(s.frequency - lines[k]) < std::abs(s.frequency - lines[nearest])) nearest = k;
    const int n = static_cast<int>(nearest);
    const double moved = oracle::generalized_rabi(omega, s.frequency - lines[nearest], tau) * (pops[n + 1] - pops[n]);
    // Moving population up by one level-index raises Mz by one unit.
    EXPECT_NEAR(s.delta_rxx, moved, 1e-12);
  }
}

TEST(Spectrum, PeaksFallOffMonotonically) {
  const SpectrumParams params;
  const double omega = kDefaultRabiOmega;
  const auto grid = default_grid(params, 1201);
  const auto spectrum = spectrum_sweep(InitialPopulations{}.density(), params, omega, kPi / omega, grid);
  const double half_window = params.delta_q * 0.8;
  for (std::size_t peak : local_maxima(spectrum)) {
    for (std::size_t k = peak + 1; k < spectrum.size() && spectrum[k].frequency - spectrum[peak].frequency < half_window; ++k)
      EXPECT_LE(spectrum[k].delta_rxx, spectrum[k - 1].delta_rxx + 1e-15);
    for (std::size_t k = peak; k > 0 && spectrum[peak].frequency - spectrum[k - 1].frequency < half_window; --k)
      EXPECT_LE(spectrum[k - 1].delta_rxx, spectrum[k].delta_rxx + 1e-15);
  }
}

TEST(Spectrum, DegenerateLadderHasOnePeak) {
  SpectrumParams params;
  params.delta_q = 0.0;
  const double omega = kDefaultRabiOmega;
  // Wider windows pick up the sinc sidelobes beyond sqrt(3) omega.
  const auto grid = default_grid(params, 201, 1.5 * omega);
  const auto spectrum = spectrum_sweep(InitialPopulations{}.density(), params, omega, kPi / omega, grid);
  const auto peaks = local_maxima(spectrum);
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_LE(std::abs(spectrum[peaks[0]].frequency - params.omega0), grid[1] - grid[0]);
}

TEST(Spectrum, RejectsNarrowGrid) {
  const SpectrumParams params;
  std::vector<double> grid;
  for (int k = 0; k < 11; ++k) grid.push_back(params.omega0 + (k - 5) * params.delta_q * 0.1);
  EXPECT_THROW(spectrum_sweep(InitialPopulations{}.density(), params, kDefaultRabiOmega, 1e-4, grid),
               std::invalid_argument);
}
