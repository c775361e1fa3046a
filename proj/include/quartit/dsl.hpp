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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quartit/pulse.hpp"

namespace quartit {

// Syntax or semantic error in a pulse program; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

// Pulse program text, one instruction per line, '#' starts a comment:
//
//   X(0,2,pi)          selective pulse AXIS(n,m,angle), AXIS in X, Y, Z
//   HARD X(pi/2)       hard pulse, AXIS in X, Y
//   PHASE i            optional prefactor: 1, -1, i, -i or exp(i*angle)
//
// Angles: [-]<decimal> | [-]pi | [-]pi/<int> | [-]<decimal>pi, plain numbers
// are radians. Line order is temporal order.
PulseSequence parse(std::string_view text);

// Blocks of instructions separated by blank lines, each parsed as one
// sequence. Line numbers in errors refer to the whole document.
std::vector<PulseSequence> parse_blocks(std::string_view text);

double parse_angle(std::string_view text);

// Inverse of parse: parse(format(s)) == s for every sequence.
std::string format(const PulseSequence& sequence);
std::string format_pulse(const Pulse& pulse);
std::string format_angle(double angle);

}  // namespace quartit
