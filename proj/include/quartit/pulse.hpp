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

#include <string_view>
#include <variant>
#include <vector>

#include "quartit/core.hpp"

namespace quartit {

enum class Axis { X, Y, Z };

char axis_letter(Axis axis);

// Ordered level pair (lower, upper) with 0 <= lower < upper <= 3.
class LevelPair {
 public:
  LevelPair(int lower, int upper);

  int lower() const { return lower_; }
  int upper() const { return upper_; }
  // Delta m of the transition: 1, 2 or 3.
  int photon_number() const { return upper_ - lower_; }

  friend bool operator==(const LevelPair&, const LevelPair&) = default;

 private:
  int lower_;
  int upper_;
};

// Six transitions of the four-level ladder, one-photon pairs first.
const std::vector<LevelPair>& all_transitions();

struct TransitionKind {
  int photon_number;
  static TransitionKind of(const LevelPair& pair) { return {pair.photon_number()}; }
};

struct SelectivePulse {
  Axis axis;
  LevelPair pair;
  double angle;
  friend bool operator==(const SelectivePulse&, const SelectivePulse&) = default;
};

struct HardPulse {
  Axis axis;
  double angle;
  friend bool operator==(const HardPulse&, const HardPulse&) = default;
};

// An ideal instantaneous rotation: selective on one level pair, or a hard
// pulse exp(-i angle I_axis) on the whole spin. Construct through the
// factories, which enforce the invariants.
class Pulse {
 public:
  static Pulse selective(Axis axis, int lower, int upper, double angle);
  static Pulse selective(Axis axis, const LevelPair& pair, double angle);
  static Pulse hard(Axis axis, double angle);

  bool is_hard() const { return std::holds_alternative<HardPulse>(body_); }
  Axis axis() const;
  double angle() const;
  // Throws std::logic_error for hard pulses.
  const LevelPair& pair() const;
  const std::variant<SelectivePulse, HardPulse>& body() const { return body_; }

  friend bool operator==(const Pulse&, const Pulse&) = default;

 private:
  explicit Pulse(std::variant<SelectivePulse, HardPulse> body) : body_(std::move(body)) {}
  std::variant<SelectivePulse, HardPulse> body_;
};

inline Pulse X(int n, int m, double angle) { return Pulse::selective(Axis::X, n, m, angle); }
inline Pulse Y(int n, int m, double angle) { return Pulse::selective(Axis::Y, n, m, angle); }
inline Pulse Z(int n, int m, double angle) { return Pulse::selective(Axis::Z, n, m, angle); }

// Pulses in temporal order (front() acts first) and a scalar prefactor
// exp(i phase_angle).
class PulseSequence {
 public:
  PulseSequence() = default;
  explicit PulseSequence(std::vector<Pulse> pulses, double phase_angle = 0.0);

  // Builds a sequence from an operator product written left to right, so the
  // rightmost factor is applied first.
  static PulseSequence from_product(std::vector<Pulse> factors, double phase_angle = 0.0);

  const std::vector<Pulse>& pulses() const { return pulses_; }
  std::size_t size() const { return pulses_.size(); }
  bool empty() const { return pulses_.empty(); }

  // Normalized to (-pi, pi].
  double phase_angle() const { return phase_angle_; }
  // Exact for quarter turns.
  Complex global_phase() const;

  // This sequence followed in time by `later`; prefactors multiply.
  PulseSequence then(const PulseSequence& later) const;

  bool has_z_pulses() const;

  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;

 private:
  std::vector<Pulse> pulses_;
  double phase_angle_ = 0.0;
};

// Temporal concatenation, first argument acts first.
PulseSequence concatenate(const std::vector<PulseSequence>& parts);

double normalize_phase(double angle);
Complex unit_phase(double angle);

UnitaryOperator pulse_unitary(const Pulse& pulse);

// global_phase * U_k ... U_2 U_1, with U_1 the earliest pulse.
UnitaryOperator compile(const PulseSequence& sequence);

DensityMatrix apply(const UnitaryOperator& u, const DensityMatrix& rho);
QuartitState apply_state(const UnitaryOperator& u, const QuartitState& psi);

}  // namespace quartit
