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

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "quartit/core.hpp"
#include "quartit/dynamics.hpp"
#include "quartit/gates.hpp"
#include "quartit/tomography.hpp"

namespace quartit::io {

enum class Format { tabular, structured };

Format format_from_string(std::string_view name);

// Shortest decimal text that parses back to the same double.
std::string number(double value);

// {"format": "quartit-matrix", "rows": 4, "cols": 4,
//  "entries": [[re, im], ...]} with the 16 entries in row-major order.
std::string write_matrix(const Matrix4& m);
Matrix4 read_matrix(std::string_view text);

std::string write_reports(const std::vector<VerificationReport>& reports, Format format);
std::string write_trials(const std::vector<tomography::TrialRecord>& trials, Format format);
std::string write_map(const tomography::MeasurementMap& map);

// Ordered key=value pairs written as '# key=value' header lines.
using Header = std::vector<std::pair<std::string, std::string>>;

// Columns t, mz, delta_rxx.
std::string write_time_series(const dynamics::TimeSeries& series, const Header& header);
// Columns frequency, mz, delta_rxx.
std::string write_spectrum(const std::vector<dynamics::SpectrumPoint>& spectrum, const Header& header);

struct Table {
  std::map<std::string, std::string> header;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(std::string_view name) const;
};

// Reads the comma-separated tables written above.
Table read_table(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace quartit::io
