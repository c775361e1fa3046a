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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quartit/core.hpp"
#include "quartit/pulse.hpp"

namespace quartit {

struct GateTarget {
  std::string name;
  UnitaryOperator matrix;
  std::string description;
};

enum class ClaimedRelation { exact, cnot_like, swap_like };

std::string_view to_string(ClaimedRelation relation);

struct NamedSequence {
  std::string name;
  PulseSequence sequence;
  std::string claimed_target;
  ClaimedRelation claimed_relation = ClaimedRelation::exact;
  // Reference matrix written from the coefficient map of a CNOT-like or
  // SWAP-like gate; the compiled unitary must match it exactly.
  std::optional<std::string> reference_target;
  // Named subsequences this entry was assembled from, in temporal order.
  std::vector<std::string> components;
  std::string notes;
};

// Expected classification of one sequence against its claimed target.
struct PinnedExpectation {
  std::string name;
  EquivalenceTag tag = EquivalenceTag::mismatch;
  std::optional<double> phase;
  std::optional<std::array<double, 4>> diagonal_phases;
  std::vector<EntryPosition> sign_flips;
};

struct VerificationReport {
  std::string sequence_name;
  UnitaryOperator compiled;
  GateTarget target;
  EquivalenceClass equivalence;
  std::optional<std::string> reference_name;
  std::optional<EquivalenceClass> reference_equivalence;
  // Sequence uses Z frame rotations that have no rf realization.
  bool non_rf = false;
  std::string notes;
};

// Logical-basis gates: NOT_A, NOT_B, NOT_AB, H_A, H_B, CNOT_AB, CNOT_BA,
// SWAP, and the CNOT_LIKE_AB, CNOT_LIKE_BA, SWAP_LIKE reference maps.
const std::vector<GateTarget>& target_table();
const GateTarget& find_target(std::string_view name);

// Unitary with new amplitude c'_i = signs[i] * c_{source[i]}.
UnitaryOperator coefficient_map(const std::array<int, 4>& source,
                                const std::array<Complex, 4>& signs = {1.0, 1.0, 1.0, 1.0});

const std::vector<NamedSequence>& gate_sequences();
const NamedSequence& find_sequence(std::string_view name);

VerificationReport verify(std::string_view name, double tolerance = kEquivalenceTolerance);
std::vector<VerificationReport> verify_all(double tolerance = kEquivalenceTolerance);

// Golden classifications, one per gate sequence.
const std::vector<PinnedExpectation>& pinned_expectations();

// Reads "NAME TAG [DETAIL]" lines ('#' comments). DETAIL is an angle for
// global_phase, four comma-separated angles for diagonal_phase, and
// "(r,c)" entries joined by ';' for sign_flips.
std::vector<PinnedExpectation> parse_pinned(std::string_view text);
std::string format_pinned(const std::vector<PinnedExpectation>& pins);

// Human-readable differences between reports and pins; empty when all agree.
// Every pin must have a report and vice versa.
std::vector<std::string> compare_with_pins(const std::vector<VerificationReport>& reports,
                                           const std::vector<PinnedExpectation>& pins,
                                           double tolerance = 1e-9);

// X_01(pi/2) X_12(pi), applied X_12 first, against X_02(pi/2). The two are
// not equivalent; the result is pinned as mismatch.
EquivalenceClass two_photon_decomposition_check(double tolerance = kEquivalenceTolerance);

}  // namespace quartit
