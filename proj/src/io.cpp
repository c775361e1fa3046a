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

#include "quartit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "quartit/dsl.hpp"

namespace quartit::io {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(line);
  while (std::getline(is, item, delim)) {
    const auto first = item.find_first_not_of(" \t\r");
    const auto last = item.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? "" : item.substr(first, last - first + 1));
  }
  return out;
}

void write_header(std::ostringstream& os, const Header& header) {
  for (const auto& [key, value] : header) os << "# " << key << '=' << value << '\n';
}

json equivalence_json(const EquivalenceClass& eq) {
  json j;
  j["class"] = std::string(to_string(eq.tag));
  j["residual"] = eq.residual;
  if (eq.tag == EquivalenceTag::global_phase) j["phase"] = eq.phase;
  if (eq.tag == EquivalenceTag::diagonal_phase) j["phases"] = eq.diagonal_phases;
  if (eq.tag == EquivalenceTag::sign_flips) {
    json flips = json::array();
    for (const auto& f : eq.sign_flips) flips.push_back({f.row, f.col});
    j["sign_flips"] = flips;
  }
  return j;
}

std::string detail(const EquivalenceClass& eq) {
  std::ostringstream os;
  switch (eq.tag) {
    case EquivalenceTag::global_phase:
      os << "phase=" << number(eq.phase);
      break;
    case EquivalenceTag::diagonal_phase:
      os << "phases=";
      for (int i = 0; i < 4; ++i) os << (i ? ";" : "") << number(eq.diagonal_phases[i]);
      break;
    case EquivalenceTag::sign_flips:
      os << "flips=";
      for (std::size_t i = 0; i < eq.sign_flips.size(); ++i) {
        os << (i ? ";" : "") << '(' << eq.sign_flips[i].row << ' ' << eq.sign_flips[i].col << ')';
      }
      break;
    default:
      os << '-';
  }
  return os.str();
}

}  // namespace

Format format_from_string(std::string_view name) {
  if (name == "tabular") return Format::tabular;
  if (name == "structured") return Format::structured;
  throw std::invalid_argument("format must be 'tabular' or 'structured'");
}

std::string number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, end);
}

std::string write_matrix(const Matrix4& m) {
  json entries = json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  json doc = {{"format", "quartit-matrix"}, {"rows", 4}, {"cols", 4}, {"entries", entries}};
  return doc.dump(2) + "\n";
}

Matrix4 read_matrix(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("matrix document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("rows", 0) != 4 || doc.value("cols", 0) != 4 ||
      !doc.contains("entries") || !doc["entries"].is_array() || doc["entries"].size() != 16) {
    throw std::invalid_argument("matrix document must hold 4x4 entries as 16 [re, im] pairs");
  }
  Matrix4 m;
  for (int k = 0; k < 16; ++k) {
    const json& e = doc["entries"][static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw std::invalid_argument("matrix entry " + std::to_string(k) + " is not an [re, im] pair");
    }
    m(k / 4, k % 4) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

std::string write_reports(const std::vector<VerificationReport>& reports, Format format) {
  if (format == Format::structured) {
    json doc = json::array();
    for (const auto& r : reports) {
      json j = equivalence_json(r.equivalence);
      j["name"] = r.sequence_name;
      j["target"] = r.target.name;
      if (r.reference_name && r.reference_equivalence) {
        j["reference"] = equivalence_json(*r.reference_equivalence);
        j["reference"]["name"] = *r.reference_name;
      }
      j["non_rf"] = r.non_rf;
      j["notes"] = r.notes;
      doc.push_back(j);
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "name,target,class,residual,detail,reference,reference_class,non_rf\n";
  for (const auto& r : reports) {
    os << r.sequence_name << ',' << r.target.name << ',' << to_string(r.equivalence.tag) << ','
       << number(r.equivalence.residual) << ',' << detail(r.equivalence) << ','
       << r.reference_name.value_or("-") << ','
       << (r.reference_equivalence ? std::string(to_string(r.reference_equivalence->tag)) : "-") << ','
       << (r.non_rf ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string write_trials(const std::vector<tomography::TrialRecord>& trials, Format format) {
  if (format == Format::structured) {
    json doc = json::array();
    for (const auto& t : trials) {
      doc.push_back({{"trial", t.trial},
                     {"set_name", t.set_name},
                     {"noise_sigma", t.noise_sigma},
                     {"frobenius_error_raw", t.frobenius_error_raw},
                     {"frobenius_error_physical", t.frobenius_error_physical},
                     {"residual_norm", t.residual_norm}});
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "trial,set_name,noise_sigma,frobenius_error_raw,frobenius_error_physical,residual_norm\n";
  for (const auto& t : trials) {
    os << t.trial << ',' << t.set_name << ',' << number(t.noise_sigma) << ','
       << number(t.frobenius_error_raw) << ',' << number(t.frobenius_error_physical) << ','
       << number(t.residual_norm) << '\n';
  }
  return os.str();
}

std::string write_map(const tomography::MeasurementMap& map) {
  std::ostringstream os;
  os << "# parametrization=diagonals rho00..rho33, then Re and Im of rho01,rho02,rho03,rho12,rho13,rho23\n";
  os << "row";
  for (int p = 0; p < tomography::kParameterCount; ++p) os << ',' << tomography::parameter_name(p);
  os << '\n';
  for (int r = 0; r < map.rows(); ++r) {
    os << map.row_labels[static_cast<std::size_t>(r)];
    for (int p = 0; p < tomography::kParameterCount; ++p) os << ',' << number(map.matrix(r, p));
    os << '\n';
  }
  return os.str();
}

std::string write_time_series(const dynamics::TimeSeries& series, const Header& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "t,mz,delta_rxx\n";
  for (const auto& s : series.samples) {
    os << number(s.t) << ',' << number(s.mz) << ',' << number(s.delta_rxx) << '\n';
  }
  return os.str();
}

std::string write_spectrum(const std::vector<dynamics::SpectrumPoint>& spectrum, const Header& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "frequency,mz,delta_rxx\n";
  for (const auto& p : spectrum) {
    os << number(p.frequency) << ',' << number(p.mz) << ',' << number(p.delta_rxx) << '\n';
  }
  return os.str();
}

std::vector<double> Table::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& row : rows) out.push_back(row[c]);
      return out;
    }
  }
  throw std::invalid_argument("table has no column '" + std::string(name) + "'");
}

Table read_table(std::string_view text) {
  Table table;
  std::istringstream is{std::string(text)};
  std::string line;
  int number_of_line = 0;
  while (std::getline(is, line)) {
    ++number_of_line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        const auto key_start = line.find_first_not_of("# ");
        table.header[line.substr(key_start, eq - key_start)] = line.substr(eq + 1);
      }
      continue;
    }
    const auto cells = split(line, ',');
    if (table.columns.empty()) {
      table.columns = cells;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw std::invalid_argument("line " + std::to_string(number_of_line) + ": expected " +
                                  std::to_string(table.columns.size()) + " columns");
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      double v = 0.0;
      auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || end != cell.data() + cell.size()) {
        throw std::invalid_argument("line " + std::to_string(number_of_line) + ": non-numeric cell '" +
                                    cell + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw std::invalid_argument("table has no header row");
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace quartit::io
