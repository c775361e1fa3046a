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

#include "quartit/gates.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "quartit/dsl.hpp"

namespace quartit {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix4 kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

std::vector<GateTarget> build_targets() {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);

  std::vector<GateTarget> t;
  t.push_back({"NOT_A", UnitaryOperator(kron(x, id)), "X on qubit A: (c0,c1,c2,c3) -> (c2,c3,c0,c1)"});
  t.push_back({"NOT_B", UnitaryOperator(kron(id, x)), "X on qubit B: (c0,c1,c2,c3) -> (c1,c0,c3,c2)"});
  t.push_back({"NOT_AB", UnitaryOperator(kron(x, x)), "X on both qubits: (c0,c1,c2,c3) -> (c3,c2,c1,c0)"});
  t.push_back({"H_A", UnitaryOperator(kron(h, id)), "Hadamard on qubit A"});
  t.push_back({"H_B", UnitaryOperator(kron(id, h)), "Hadamard on qubit B"});
  t.push_back({"CNOT_AB", coefficient_map({0, 1, 3, 2}),
               "control A, target B: (c0,c1,c2,c3) -> (c0,c1,c3,c2)"});
  t.push_back({"CNOT_BA", coefficient_map({0, 3, 2, 1}),
               "control B, target A: (c0,c1,c2,c3) -> (c0,c3,c2,c1)"});
  t.push_back({"SWAP", coefficient_map({0, 2, 1, 3}), "(c0,c1,c2,c3) -> (c0,c2,c1,c3)"});
  t.push_back({"CNOT_LIKE_AB", coefficient_map({0, 1, 3, 2}, {1.0, 1.0, -1.0, 1.0}),
               "CNOT-like, control A: (c0,c1,c2,c3) -> (c0,c1,-c3,c2)"});
  t.push_back({"CNOT_LIKE_BA", coefficient_map({0, 3, 2, 1}, {1.0, -1.0, 1.0, 1.0}),
               "CNOT-like, control B: (c0,c1,c2,c3) -> (c0,-c3,c2,c1)"});
  t.push_back({"SWAP_LIKE", coefficient_map({0, 2, 1, 3}, {1.0, -1.0, 1.0, 1.0}),
               "SWAP-like: (c0,c1,c2,c3) -> (c0,-c2,c1,c3)"});
  return t;
}

const NamedSequence& sequence_named(const std::vector<NamedSequence>& table, std::string_view name) {
  for (const auto& entry : table) {
    if (entry.name == name) return entry;
  }
  throw std::invalid_argument("unknown sequence '" + std::string(name) + "'");
}

// Gate sequences transcribed as operator products (rightmost pulse first),
// with their scalar prefactors.
std::vector<NamedSequence> build_sequences() {
  std::vector<NamedSequence> s;
  const auto product = [](std::vector<Pulse> factors, double phase = 0.0) {
    return PulseSequence::from_product(std::move(factors), phase);
  };

  s.push_back({"NOT_A", product({X(0, 2, kPi), X(1, 3, kPi)}, kPi / 2), "NOT_A",
               ClaimedRelation::exact, std::nullopt, {}, "i X02(pi) X13(pi), two-photon pulses"});
  s.push_back({"NOT_B", product({X(0, 1, kPi), X(2, 3, kPi)}, kPi / 2), "NOT_B",
               ClaimedRelation::exact, std::nullopt, {}, "i X01(pi) X23(pi), one-photon pulses"});
  s.push_back({"NOT_AB", PulseSequence({Pulse::hard(Axis::X, kPi)}), "NOT_AB",
               ClaimedRelation::exact, std::nullopt, {}, "hard pi pulse about X"});
  s.push_back({"NOT_A_VIA_HARD", s[2].sequence.then(s[1].sequence), "NOT_A",
               ClaimedRelation::exact, std::nullopt, {"NOT_AB", "NOT_B"},
               "hard pi pulse followed by NOT_B"});
  s.push_back({"H_A",
               product({Y(1, 2, kPi), X(0, 1, kPi), Y(0, 1, kPi / 2), X(2, 3, -kPi),
                        Y(2, 3, -kPi / 2), Y(1, 2, -kPi)},
                       kPi / 2),
               "H_A", ClaimedRelation::exact, std::nullopt, {},
               "i Y12(pi) X01(pi) Y01(pi/2) X23(-pi) Y23(-pi/2) Y12(-pi)"});
  s.push_back({"H_B", product({X(0, 1, kPi), Y(0, 1, kPi / 2), X(2, 3, kPi), Y(2, 3, kPi / 2)}, kPi / 2),
               "H_B", ClaimedRelation::exact, std::nullopt, {}, "i X01(pi) Y01(pi/2) X23(pi) Y23(pi/2)"});

  s.push_back({"CNOT_LIKE_AB_Y", PulseSequence({Y(2, 3, kPi)}), "CNOT_AB", ClaimedRelation::cnot_like,
               "CNOT_LIKE_AB", {}, "Y23(pi): one minus sign relative to CNOT_AB"});
  s.push_back({"CNOT_LIKE_BA_Y", PulseSequence({Y(1, 3, kPi)}), "CNOT_BA", ClaimedRelation::cnot_like,
               "CNOT_LIKE_BA", {},
               "Y13(pi): control B, target A; written with superscript AB in the source text"});
  s.push_back({"CNOT_LIKE_AB_X", PulseSequence({X(2, 3, kPi)}), "CNOT_AB", ClaimedRelation::cnot_like,
               std::nullopt, {}, "X23(pi): -i factors on the swapped block, not a single minus sign"});
  s.push_back({"CNOT_LIKE_BA_X", PulseSequence({X(1, 3, kPi)}), "CNOT_BA", ClaimedRelation::cnot_like,
               std::nullopt, {}, "X13(pi): -i factors on the swapped block, not a single minus sign"});

  const PulseSequence& hb = s[5].sequence;
  const PulseSequence core =
      product({Z(2, 3, kPi), Y(1, 2, -kPi), Z(2, 3, kPi / 2), Z(0, 1, kPi / 2), Y(1, 2, kPi)});
  s.push_back({"CNOT_AB", concatenate({hb, core, hb}), "CNOT_AB", ClaimedRelation::exact, std::nullopt,
               {"H_B", "Y12(pi)", "Z01(pi/2)", "Z23(pi/2)", "Y12(-pi)", "Z23(pi)", "H_B"},
               "H_B Z23(pi) Y12(-pi) Z23(pi/2) Z01(pi/2) Y12(pi) H_B"});
  const PulseSequence hadamards = s[4].sequence.then(hb);
  s.push_back({"CNOT_BA", concatenate({hadamards, s.back().sequence, hadamards}), "CNOT_BA",
               ClaimedRelation::exact, std::nullopt, {"H_A", "H_B", "CNOT_AB", "H_A", "H_B"},
               "CNOT_AB conjugated by H_A H_B; assembled from the listed gate sequences"});

  s.push_back({"SWAP_LIKE_Y", PulseSequence({Y(1, 2, kPi)}), "SWAP", ClaimedRelation::swap_like,
               "SWAP_LIKE", {}, "Y12(pi): one minus sign relative to SWAP"});
  s.push_back({"SWAP_LIKE_X", PulseSequence({X(1, 2, kPi)}), "SWAP", ClaimedRelation::swap_like,
               std::nullopt, {}, "X12(pi): -i factors on the swapped block"});

  const PulseSequence& cnot_ab = sequence_named(s, "CNOT_AB").sequence;
  const PulseSequence& cnot_ba = sequence_named(s, "CNOT_BA").sequence;
  s.push_back({"SWAP", concatenate({cnot_ab, cnot_ba, cnot_ab}), "SWAP", ClaimedRelation::exact,
               std::nullopt, {"CNOT_AB", "CNOT_BA", "CNOT_AB"}, "CNOT_AB CNOT_BA CNOT_AB"});
  return s;
}

std::string format_flips(const std::vector<EntryPosition>& flips) {
  std::string out;
  for (std::size_t i = 0; i < flips.size(); ++i) {
    if (i) out += ';';
    out += "(" + std::to_string(flips[i].row) + "," + std::to_string(flips[i].col) + ")";
  }
  return out;
}

std::vector<EntryPosition> parse_flips(std::string_view text, int line) {
  std::vector<EntryPosition> out;
  std::string s(text);
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ';')) {
    int r = -1, c = -1;
    if (std::sscanf(item.c_str(), " (%d,%d)", &r, &c) != 2 || r < 0 || r > 3 || c < 0 || c > 3) {
      throw std::invalid_argument("line " + std::to_string(line) + ": malformed sign-flip entry '" +
                                  item + "'");
    }
    out.push_back({r, c});
  }
  return out;
}

double phase_distance(double a, double b) { return std::abs(normalize_phase(a - b)); }

}  // namespace

std::string_view to_string(ClaimedRelation relation) {
  switch (relation) {
    case ClaimedRelation::exact: return "exact";
    case ClaimedRelation::cnot_like: return "CNOT-like";
    case ClaimedRelation::swap_like: return "SWAP-like";
  }
  return "exact";
}

UnitaryOperator coefficient_map(const std::array<int, 4>& source, const std::array<Complex, 4>& signs) {
  Matrix4 u = Matrix4::Zero();
  for (int i = 0; i < 4; ++i) u(i, source[i]) = signs[i];
  return UnitaryOperator(u);
}

const std::vector<GateTarget>& target_table() {
  static const std::vector<GateTarget> table = build_targets();
  return table;
}

const GateTarget& find_target(std::string_view name) {
  for (const auto& target : target_table()) {
    if (target.name == name) return target;
  }
  throw std::invalid_argument("unknown gate target '" + std::string(name) + "'");
}

const std::vector<NamedSequence>& gate_sequences() {
  static const std::vector<NamedSequence> table = build_sequences();
  return table;
}

const NamedSequence& find_sequence(std::string_view name) { return sequence_named(gate_sequences(), name); }

VerificationReport verify(std::string_view name, double tolerance) {
  const NamedSequence& entry = find_sequence(name);
  VerificationReport report;
  report.sequence_name = entry.name;
  report.compiled = compile(entry.sequence);
  report.target = find_target(entry.claimed_target);
  report.equivalence = equivalence_class(report.compiled, report.target.matrix, tolerance);
  if (entry.reference_target) {
    report.reference_name = entry.reference_target;
    report.reference_equivalence =
        equivalence_class(report.compiled, find_target(*entry.reference_target).matrix, tolerance);
  }
  report.non_rf = entry.sequence.has_z_pulses();
  report.notes = entry.notes;
  if (report.non_rf) report.notes += "; contains Z frame rotations (non-rf)";
  return report;
}

std::vector<VerificationReport> verify_all(double tolerance) {
  std::vector<VerificationReport> reports;
  for (const auto& entry : gate_sequences()) reports.push_back(verify(entry.name, tolerance));
  return reports;
}

const std::vector<PinnedExpectation>& pinned_expectations() {
  using T = EquivalenceTag;
  static const std::vector<PinnedExpectation> pins = {
      {"NOT_A", T::exact, std::nullopt, std::nullopt, {}},
      {"NOT_B", T::exact, std::nullopt, std::nullopt, {}},
      {"NOT_AB", T::global_phase, kPi / 2, std::nullopt, {}},
      {"NOT_A_VIA_HARD", T::global_phase, kPi / 2, std::nullopt, {}},
      {"H_A", T::exact, std::nullopt, std::nullopt, {}},
      {"H_B", T::exact, std::nullopt, std::nullopt, {}},
      {"CNOT_LIKE_AB_Y", T::sign_flips, std::nullopt, std::nullopt, {{2, 3}}},
      {"CNOT_LIKE_BA_Y", T::sign_flips, std::nullopt, std::nullopt, {{1, 3}}},
      {"CNOT_LIKE_AB_X", T::diagonal_phase, std::nullopt,
       std::array<double, 4>{0.0, 0.0, -kPi / 2, -kPi / 2}, {}},
      {"CNOT_LIKE_BA_X", T::diagonal_phase, std::nullopt,
       std::array<double, 4>{0.0, -kPi / 2, 0.0, -kPi / 2}, {}},
      {"CNOT_AB", T::global_phase, -kPi / 4, std::nullopt, {}},
      {"CNOT_BA", T::global_phase, -kPi / 4, std::nullopt, {}},
      {"SWAP_LIKE_Y", T::sign_flips, std::nullopt, std::nullopt, {{1, 2}}},
      {"SWAP_LIKE_X", T::diagonal_phase, std::nullopt,
       std::array<double, 4>{0.0, -kPi / 2, -kPi / 2, 0.0}, {}},
      {"SWAP", T::global_phase, -3 * kPi / 4, std::nullopt, {}},
  };
  return pins;
}

std::vector<PinnedExpectation> parse_pinned(std::string_view text) {
  std::vector<PinnedExpectation> pins;
  std::istringstream is{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string name, tag, detail;
    if (!(ls >> name)) continue;
    if (!(ls >> tag)) {
      throw std::invalid_argument("line " + std::to_string(line) + ": missing class tag");
    }
    ls >> detail;
    PinnedExpectation pin;
    pin.name = name;
    pin.tag = equivalence_tag_from_string(tag);
    try {
      switch (pin.tag) {
        case EquivalenceTag::global_phase:
          pin.phase = parse_angle(detail);
          break;
        case EquivalenceTag::diagonal_phase: {
          std::array<double, 4> phases{};
          std::istringstream ds(detail);
          std::string item;
          int k = 0;
          while (std::getline(ds, item, ',')) {
            if (k >= 4) throw std::invalid_argument("too many diagonal phases");
            phases[k++] = parse_angle(item);
          }
          if (k != 4) throw std::invalid_argument("diagonal_phase needs four angles");
          pin.diagonal_phases = phases;
          break;
        }
        case EquivalenceTag::sign_flips:
          pin.sign_flips = parse_flips(detail, line);
          break;
        default:
          break;
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(line) + ": " + e.what());
    }
    pins.push_back(std::move(pin));
  }
  return pins;
}

std::string format_pinned(const std::vector<PinnedExpectation>& pins) {
  std::ostringstream os;
  for (const auto& pin : pins) {
    os << pin.name << ' ' << to_string(pin.tag);
    if (pin.phase) os << ' ' << format_angle(*pin.phase);
    if (pin.diagonal_phases) {
      os << ' ';
      for (int i = 0; i < 4; ++i) os << (i ? "," : "") << format_angle((*pin.diagonal_phases)[i]);
    }
    if (!pin.sign_flips.empty()) os << ' ' << format_flips(pin.sign_flips);
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> compare_with_pins(const std::vector<VerificationReport>& reports,
                                           const std::vector<PinnedExpectation>& pins,
                                           double tolerance) {
  std::vector<std::string> diffs;
  for (const auto& report : reports) {
    const PinnedExpectation* pin = nullptr;
    for (const auto& p : pins) {
      if (p.name == report.sequence_name) pin = &p;
    }
    if (!pin) {
      diffs.push_back(report.sequence_name + ": no pinned expectation");
      continue;
    }
    const auto& eq = report.equivalence;
    if (eq.tag != pin->tag) {
      diffs.push_back(report.sequence_name + ": expected " + std::string(to_string(pin->tag)) +
                      ", got " + std::string(to_string(eq.tag)));
      continue;
    }
    if (pin->phase && phase_distance(*pin->phase, eq.phase) > tolerance) {
      diffs.push_back(report.sequence_name + ": expected phase " + format_angle(*pin->phase) +
                      ", got " + format_angle(eq.phase));
    }
    if (pin->diagonal_phases) {
      for (int i = 0; i < 4; ++i) {
        if (phase_distance((*pin->diagonal_phases)[i], eq.diagonal_phases[i]) > tolerance) {
          diffs.push_back(report.sequence_name + ": diagonal phase " + std::to_string(i) +
                          " differs");
        }
      }
    }
    if (pin->tag == EquivalenceTag::sign_flips && pin->sign_flips != eq.sign_flips) {
      diffs.push_back(report.sequence_name + ": expected sign flips " + format_flips(pin->sign_flips) +
                      ", got " + format_flips(eq.sign_flips));
    }
  }
  for (const auto& pin : pins) {
    bool found = false;
    for (const auto& report : reports) found = found || report.sequence_name == pin.name;
    if (!found) diffs.push_back(pin.name + ": pinned but not verified");
  }
  return diffs;
}

EquivalenceClass two_photon_decomposition_check(double tolerance) {
  const auto decomposed = compile(PulseSequence::from_product({X(0, 1, kPi / 2), X(1, 2, kPi)}));
  return equivalence_class(decomposed, pulse_unitary(X(0, 2, kPi / 2)), tolerance);
}

}  // namespace quartit
