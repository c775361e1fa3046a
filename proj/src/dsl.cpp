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

#include "quartit/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace quartit {

namespace {

constexpr double kPi = std::numbers::pi;

class LineParser {
 public:
  LineParser(std::string_view line, int line_number) : text_(line), line_(line_number) {}

  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }

  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
    throw ParseError(line_, static_cast<int>(pos) + 1, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  bool consume_word(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t next = pos_ + word.size();
    if (next < text_.size() && std::isalnum(static_cast<unsigned char>(text_[next]))) return false;
    pos_ = next;
    return true;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  std::optional<Axis> axis() {
    skip_space();
    if (pos_ >= text_.size()) return std::nullopt;
    switch (text_[pos_]) {
      case 'X': ++pos_; return Axis::X;
      case 'Y': ++pos_; return Axis::Y;
      case 'Z': ++pos_; return Axis::Z;
      default: return std::nullopt;
    }
  }

  int level() {
    skip_space();
    const std::size_t start = pos_;
    int value = 0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("expected a level index");
    pos_ = static_cast<std::size_t>(end - text_.data());
    if (value < 0 || value > 3) fail_at(start, "level " + std::to_string(value) + " out of range 0..3");
    return value;
  }

  double angle() {
    skip_space();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    double value = 0.0;
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      value = kPi;
      if (peek('/')) {
        ++pos_;
        skip_space();
        int divisor = 0;
        auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), divisor);
        if (ec != std::errc() || divisor <= 0) fail("expected a positive integer divisor after 'pi/'");
        pos_ = static_cast<std::size_t>(end - text_.data());
        value = kPi / divisor;
      }
    } else {
      const std::size_t number_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t p = pos_ + 1;
        if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
        if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
          pos_ = p;
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
      }
      const std::string_view number = text_.substr(number_start, pos_ - number_start);
      auto [end, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
      if (number.empty() || ec != std::errc() || end != number.data() + number.size()) {
        fail_at(start, "malformed angle");
      }
      if (text_.substr(pos_, 2) == "pi") {
        pos_ += 2;
        value *= kPi;
      }
    }
    if (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
      fail("unexpected character in angle");
    }
    if (!std::isfinite(value)) fail_at(start, "angle must be finite");
    return negative ? -value : value;
  }

  std::size_t position() const { return pos_; }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::string shortest(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, end);
}

struct SequenceBuilder {
  std::vector<Pulse> pulses;
  std::optional<double> phase;
  int phase_line = 0;

  void add_line(std::string_view raw, int line_number) {
    const std::string_view line = strip_comment(raw);
    LineParser p(line, line_number);
    if (p.at_end()) return;
    if (p.consume_word("PHASE")) {
      if (phase) {
        p.fail("duplicate PHASE directive (first on line " + std::to_string(phase_line) + ")");
      }
      phase = phase_expression(p);
      phase_line = line_number;
    } else if (p.consume_word("HARD")) {
      const auto axis = p.axis();
      if (!axis) p.fail("expected hard pulse axis X or Y");
      if (*axis == Axis::Z) p.fail_at(p.position() - 1, "hard Z pulses are not supported");
      p.expect('(');
      const double angle = p.angle();
      p.expect(')');
      pulses.push_back(Pulse::hard(*axis, angle));
    } else {
      const auto axis = p.axis();
      if (!axis) p.fail("expected X, Y, Z, HARD or PHASE");
      p.expect('(');
      const std::size_t pair_pos = p.position();
      const int n = p.level();
      p.expect(',');
      const int m = p.level();
      p.expect(',');
      const double angle = p.angle();
      p.expect(')');
      if (n >= m) {
        p.fail_at(pair_pos, "levels must satisfy n<m, got (" + std::to_string(n) + "," +
                                std::to_string(m) + ")");
      }
      pulses.push_back(Pulse::selective(*axis, n, m, angle));
    }
    if (!p.at_end()) p.fail("unexpected trailing input");
  }

  static double phase_expression(LineParser& p) {
    if (p.consume_word("exp")) {
      p.expect('(');
      if (!p.consume_word("i")) p.fail("expected 'i*' in exp(i*angle)");
      p.expect('*');
      const double angle = p.angle();
      p.expect(')');
      return angle;
    }
    if (p.consume_word("i")) return kPi / 2;
    if (p.consume_word("1")) return 0.0;
    if (p.peek('-')) {
      p.expect('-');
      if (p.consume_word("i")) return -kPi / 2;
      if (p.consume_word("1")) return kPi;
    }
    p.fail("PHASE expects 1, -1, i, -i or exp(i*angle)");
  }

  PulseSequence build() const { return PulseSequence(pulses, phase.value_or(0.0)); }
};

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int number = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (end == std::string_view::npos && line.empty()) break;
    fn(line, number);
    if (end == std::string_view::npos) break;
    start = end + 1;
    ++number;
  }
}

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

PulseSequence parse(std::string_view text) {
  SequenceBuilder builder;
  for_each_line(text, [&](std::string_view line, int number) { builder.add_line(line, number); });
  return builder.build();
}

std::vector<PulseSequence> parse_blocks(std::string_view text) {
  std::vector<PulseSequence> blocks;
  std::optional<SequenceBuilder> current;
  bool has_content = false;
  auto flush = [&] {
    if (current && has_content) blocks.push_back(current->build());
    current.reset();
    has_content = false;
  };
  for_each_line(text, [&](std::string_view line, int number) {
    if (is_blank(line)) {
      flush();
      return;
    }
    if (!current) current.emplace();
    const auto before = current->pulses.size();
    const bool had_phase = current->phase.has_value();
    current->add_line(line, number);
    if (current->pulses.size() != before || current->phase.has_value() != had_phase) {
      has_content = true;
    }
  });
  flush();
  return blocks;
}

double parse_angle(std::string_view text) {
  try {
    LineParser p(text, 1);
    const double angle = p.angle();
    if (!p.at_end()) p.fail("unexpected trailing input");
    return angle;
  } catch (const ParseError& e) {
    throw std::invalid_argument("bad angle '" + std::string(text) + "': " + e.detail());
  }
}

std::string format_angle(double angle) {
  if (angle == 0.0) return "0";
  const std::string sign = angle < 0 ? "-" : "";
  const double magnitude = std::abs(angle);
  if (magnitude == kPi) return sign + "pi";
  for (int q = 2; q <= 1024; ++q) {
    if (magnitude == kPi / q) return sign + "pi/" + std::to_string(q);
  }
  const std::string ratio = shortest(magnitude / kPi);
  if (ratio.size() <= 8 && ratio.find('e') == std::string::npos) {
    double parsed = 0.0;
    std::from_chars(ratio.data(), ratio.data() + ratio.size(), parsed);
    if (parsed * kPi == magnitude) return sign + ratio + "pi";
  }
  return sign + shortest(magnitude);
}

std::string format_pulse(const Pulse& pulse) {
  std::ostringstream os;
  if (pulse.is_hard()) {
    os << "HARD " << axis_letter(pulse.axis()) << '(' << format_angle(pulse.angle()) << ')';
  } else {
    os << axis_letter(pulse.axis()) << '(' << pulse.pair().lower() << ',' << pulse.pair().upper()
       << ',' << format_angle(pulse.angle()) << ')';
  }
  return os.str();
}

std::string format(const PulseSequence& sequence) {
  std::ostringstream os;
  const double phase = sequence.phase_angle();
  if (phase == kPi) {
    os << "PHASE -1\n";
  } else if (phase == kPi / 2) {
    os << "PHASE i\n";
  } else if (phase == -kPi / 2) {
    os << "PHASE -i\n";
  } else if (phase != 0.0) {
    os << "PHASE exp(i*" << format_angle(phase) << ")\n";
  }
  for (const auto& pulse : sequence.pulses()) os << format_pulse(pulse) << '\n';
  return os.str();
}

}  // namespace quartit
