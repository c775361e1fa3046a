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

#include "quartit/pulse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace quartit {

namespace {

void check_angle(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("pulse angle must be finite");
}

Matrix4 hard_rotation(Axis axis, double angle) {
  const auto& spin = spin_operators();
  const Matrix4& generator = axis == Axis::X ? spin.ix : spin.iy;
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(generator);
  Vector4 phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::polar(1.0, -angle * solver.eigenvalues()(i));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

char axis_letter(Axis axis) {
  switch (axis) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

LevelPair::LevelPair(int lower, int upper) : lower_(lower), upper_(upper) {
  if (lower < 0 || lower > 3 || upper < 0 || upper > 3) {
    throw std::invalid_argument("level indices must lie in 0..3");
  }
  if (lower >= upper) {
    throw std::invalid_argument("levels must satisfy n<m, got (" + std::to_string(lower) + "," +
                                std::to_string(upper) + ")");
  }
}

const std::vector<LevelPair>& all_transitions() {
  static const std::vector<LevelPair> pairs = {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3}};
  return pairs;
}

Pulse Pulse::selective(Axis axis, int lower, int upper, double angle) {
  return selective(axis, LevelPair(lower, upper), angle);
}

Pulse Pulse::selective(Axis axis, const LevelPair& pair, double angle) {
  check_angle(angle);
  return Pulse(SelectivePulse{axis, pair, angle});
}

Pulse Pulse::hard(Axis axis, double angle) {
  check_angle(angle);
  if (axis == Axis::Z) throw std::invalid_argument("hard pulses support only X and Y axes");
  return Pulse(HardPulse{axis, angle});
}

Axis Pulse::axis() const {
  return std::visit([](const auto& p) { return p.axis; }, body_);
}

double Pulse::angle() const {
  return std::visit([](const auto& p) { return p.angle; }, body_);
}

const LevelPair& Pulse::pair() const {
  if (is_hard()) throw std::logic_error("hard pulse has no level pair");
  return std::get<SelectivePulse>(body_).pair;
}

double normalize_phase(double angle) {
  constexpr double pi = std::numbers::pi;
  double a = std::remainder(angle, 2.0 * pi);
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

Complex unit_phase(double angle) {
  constexpr double pi = std::numbers::pi;
  const double a = normalize_phase(angle);
  if (a == 0.0) return {1.0, 0.0};
  if (a == pi) return {-1.0, 0.0};
  if (a == pi / 2) return {0.0, 1.0};
  if (a == -pi / 2) return {0.0, -1.0};
  return std::polar(1.0, a);
}

PulseSequence::PulseSequence(std::vector<Pulse> pulses, double phase_angle)
    : pulses_(std::move(pulses)), phase_angle_(normalize_phase(phase_angle)) {
  if (!std::isfinite(phase_angle)) throw std::invalid_argument("phase must be finite");
}

PulseSequence PulseSequence::from_product(std::vector<Pulse> factors, double phase_angle) {
  return PulseSequence(std::vector<Pulse>(factors.rbegin(), factors.rend()), phase_angle);
}

Complex PulseSequence::global_phase() const { return unit_phase(phase_angle_); }

PulseSequence PulseSequence::then(const PulseSequence& later) const {
  std::vector<Pulse> joined = pulses_;
  joined.insert(joined.end(), later.pulses_.begin(), later.pulses_.end());
  return PulseSequence(std::move(joined), phase_angle_ + later.phase_angle_);
}

bool PulseSequence::has_z_pulses() const {
  for (const auto& p : pulses_) {
    if (!p.is_hard() && p.axis() == Axis::Z) return true;
  }
  return false;
}

PulseSequence concatenate(const std::vector<PulseSequence>& parts) {
  PulseSequence out;
  for (const auto& part : parts) out = out.then(part);
  return out;
}

UnitaryOperator pulse_unitary(const Pulse& pulse) {
  if (const auto* hard = std::get_if<HardPulse>(&pulse.body())) {
    return UnitaryOperator(hard_rotation(hard->axis, hard->angle));
  }
  const auto& p = std::get<SelectivePulse>(pulse.body());
  const double c = std::cos(p.angle / 2);
  const double s = std::sin(p.angle / 2);
  const int n = p.pair.lower();
  const int m = p.pair.upper();
  Matrix4 u = Matrix4::Identity();
  switch (p.axis) {
    case Axis::X:
      u(n, n) = c;
      u(n, m) = Complex(0.0, -s);
      u(m, n) = Complex(0.0, -s);
      u(m, m) = c;
      break;
    case Axis::Y:
      u(n, n) = c;
      u(n, m) = -s;
      u(m, n) = s;
      u(m, m) = c;
      break;
    case Axis::Z:
      u(n, n) = std::polar(1.0, -p.angle / 2);
      u(m, m) = std::polar(1.0, p.angle / 2);
      break;
  }
  return UnitaryOperator(u);
}

UnitaryOperator compile(const PulseSequence& sequence) {
  Matrix4 u = Matrix4::Identity();
  for (const auto& pulse : sequence.pulses()) u = pulse_unitary(pulse).matrix() * u;
  return UnitaryOperator(sequence.global_phase() * u);
}

DensityMatrix apply(const UnitaryOperator& u, const DensityMatrix& rho) {
  Matrix4 out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(out);
}

QuartitState apply_state(const UnitaryOperator& u, const QuartitState& psi) {
  return QuartitState(u.matrix() * psi.amplitudes());
}

}  // namespace quartit
