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

#include "quartit/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <mutex>
#include <thread>

namespace quartit::tomography {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::array<std::pair<int, int>, 6> kUpperPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

std::array<double, 3> differences(const Matrix4& m) {
  return {m(1, 1).real() - m(0, 0).real(), m(2, 2).real() - m(1, 1).real(),
          m(3, 3).real() - m(2, 2).real()};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::JacobiSVD<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m, Eigen::ComputeThinU | Eigen::ComputeFullV);
}

int numerical_rank(const Eigen::VectorXd& singular) {
  if (singular.size() == 0 || singular(0) == 0.0) return 0;
  const double cut = kRankThreshold * singular(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < singular.size(); ++i) rank += singular(i) > cut ? 1 : 0;
  return rank;
}

std::vector<std::string> null_space_parameters(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd, int rank) {
  const Eigen::MatrixXd& v = svd.matrixV();
  std::vector<std::string> names;
  for (int p = 0; p < kParameterCount; ++p) {
    double weight = 0.0;
    for (int k = rank; k < kParameterCount; ++k) weight += v(p, k) * v(p, k);
    if (weight > 1e-6) names.push_back(parameter_name(p));
  }
  return names;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

}  // namespace

ReadoutTriple readout(const DensityMatrix& rho) {
  const auto d = differences(rho.matrix());
  return {d[0], d[1], d[2]};
}

RotationSet set_twelve() {
  RotationSet set{"twelve", {}, true};
  for (const auto& [n, m] : std::array<std::pair<int, int>, 6>{{{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3}}}) {
    set.rotations.emplace_back(std::vector<Pulse>{X(n, m, kPi / 2)});
    set.rotations.emplace_back(std::vector<Pulse>{Y(n, m, kPi / 2)});
  }
  return set;
}

RotationSet set_six() {
  const auto product = [](std::vector<Pulse> factors, double phase = 0.0) {
    return PulseSequence::from_product(std::move(factors), phase);
  };
  RotationSet set{"six", {}, true};
  set.rotations = {
      product({X(0, 1, kPi / 2), X(2, 3, kPi / 2)}),
      product({Y(0, 1, kPi / 2), Y(2, 3, kPi / 2)}),
      product({X(0, 1, kPi / 2), Y(1, 3, kPi), X(1, 2, kPi / 2)}),
      product({Y(0, 1, kPi / 2), Y(1, 3, kPi), Y(1, 2, kPi / 2)}),
      product({X(0, 2, kPi / 2), X(1, 3, kPi / 2)}),
      product({Y(0, 2, kPi / 2), Y(1, 3, kPi / 2)}),
  };
  return set;
}

const std::string& parameter_name(int index) {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (int i = 0; i < 4; ++i) n.push_back("rho" + std::to_string(i) + std::to_string(i));
    for (const char* part : {"Re", "Im"}) {
      for (const auto& [j, k] : kUpperPairs) {
        n.push_back(std::string(part) + "(rho" + std::to_string(j) + std::to_string(k) + ")");
      }
    }
    return n;
  }();
  if (index < 0 || index >= kParameterCount) throw std::out_of_range("parameter index out of range");
  return names[index];
}

Matrix4 hermitian_basis(int index) {
  if (index < 0 || index >= kParameterCount) throw std::out_of_range("parameter index out of range");
  Matrix4 b = Matrix4::Zero();
  if (index < 4) {
    b(index, index) = 1.0;
    return b;
  }
  const bool imaginary = index >= 10;
  const auto [j, k] = kUpperPairs[(index - 4) % 6];
  if (imaginary) {
    b(j, k) = Complex(0.0, 1.0);
    b(k, j) = Complex(0.0, -1.0);
  } else {
    b(j, k) = 1.0;
    b(k, j) = 1.0;
  }
  return b;
}

Eigen::VectorXd to_parameters(const Matrix4& h) {
  Eigen::VectorXd x(kParameterCount);
  for (int i = 0; i < 4; ++i) x(i) = h(i, i).real();
  for (int p = 0; p < 6; ++p) {
    const auto [j, k] = kUpperPairs[p];
    x(4 + p) = h(j, k).real();
    x(10 + p) = h(j, k).imag();
  }
  return x;
}

Matrix4 from_parameters(const Eigen::VectorXd& x) {
  if (x.size() != kParameterCount) throw std::invalid_argument("expected 16 parameters");
  Matrix4 h = Matrix4::Zero();
  for (int p = 0; p < kParameterCount; ++p) h += x(p) * hermitian_basis(p);
  return h;
}

MeasurementMap measurement_map(const RotationSet& set) {
  std::vector<Matrix4> rotations;
  std::vector<std::string> names;
  if (set.include_unrotated) {
    rotations.push_back(Matrix4::Identity());
    names.push_back("unrotated");
  }
  for (std::size_t k = 0; k < set.rotations.size(); ++k) {
    rotations.push_back(compile(set.rotations[k]).matrix());
    names.push_back("R" + std::to_string(k + 1));
  }

  MeasurementMap map;
  const int rows = 3 * static_cast<int>(rotations.size()) + 1;
  map.matrix = Eigen::MatrixXd::Zero(rows, kParameterCount);
  for (std::size_t r = 0; r < rotations.size(); ++r) {
    const Matrix4& u = rotations[r];
    for (int p = 0; p < kParameterCount; ++p) {
      const auto d = differences(u * hermitian_basis(p) * u.adjoint());
      for (int i = 0; i < 3; ++i) map.matrix(3 * static_cast<int>(r) + i, p) = d[i];
    }
    for (int i = 1; i <= 3; ++i) map.row_labels.push_back(names[r] + ":d" + std::to_string(i));
  }
  map.matrix.block(rows - 1, 0, 1, 4).setOnes();
  map.row_labels.push_back("trace");
  return map;
}

Sensitivity sensitivity(const MeasurementMap& map) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map.matrix);
  const Eigen::VectorXd& s = svd.singularValues();
  Sensitivity out;
  out.rank = numerical_rank(s);
  out.sigma_max = s.size() ? s(0) : 0.0;
  out.sigma_min = out.rank > 0 ? s(out.rank - 1) : 0.0;
  out.condition = out.rank > 0 ? out.sigma_max / out.sigma_min : INFINITY;
  return out;
}

Sensitivity sensitivity(const RotationSet& set) { return sensitivity(measurement_map(set)); }

std::vector<ReadoutTriple> simulate_experiment(const DensityMatrix& rho, const RotationSet& set,
                                               double noise_sigma, std::uint64_t seed) {
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument("noise_sigma must be finite and non-negative");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto noisy = [&](const Matrix4& state) {
    auto d = differences(state);
    for (double& v : d) v += noise_sigma * normal(rng);
    return ReadoutTriple{d[0], d[1], d[2]};
  };
  std::vector<ReadoutTriple> readings;
  if (set.include_unrotated) readings.push_back(noisy(rho.matrix()));
  for (const auto& rotation : set.rotations) {
    const Matrix4 u = compile(rotation).matrix();
    readings.push_back(noisy(u * rho.matrix() * u.adjoint()));
  }
  return readings;
}

RankDeficientError::RankDeficientError(int rank, std::vector<std::string> unresolved)
    : std::runtime_error("measurement map has rank " + std::to_string(rank) + " < 16; unresolved: " +
                         join(unresolved)),
      rank_(rank),
      unresolved_(std::move(unresolved)) {}

std::vector<std::string> unresolved_parameters(const MeasurementMap& map) {
  const auto svd = decompose(map.matrix);
  return null_space_parameters(svd, numerical_rank(svd.singularValues()));
}

ReconstructionResult reconstruct(const std::vector<ReadoutTriple>& readings, const MeasurementMap& map,
                                 bool allow_rank_deficient) {
  const auto expected = static_cast<std::size_t>(map.rows() - 1);
  if (readings.size() * 3 != expected) {
    std::ostringstream os;
    os << "expected " << expected / 3 << " readout triples for this map, got " << readings.size();
    throw std::invalid_argument(os.str());
  }
  Eigen::VectorXd y(map.rows());
  for (std::size_t r = 0; r < readings.size(); ++r) {
    const auto v = readings[r].values();
    for (int i = 0; i < 3; ++i) y(3 * static_cast<Eigen::Index>(r) + i) = v[i];
  }
  y(map.rows() - 1) = 1.0;

  const auto svd = decompose(map.matrix);
  const Eigen::VectorXd& s = svd.singularValues();
  const int rank = numerical_rank(s);
  if (rank < kParameterCount && !allow_rank_deficient) {
    throw RankDeficientError(rank, null_space_parameters(svd, rank));
  }
  const Eigen::VectorXd projected = svd.matrixU().leftCols(rank).transpose() * y;
  const Eigen::VectorXd scaled = projected.cwiseQuotient(s.head(rank));
  const Eigen::VectorXd x = svd.matrixV().leftCols(rank) * scaled;

  ReconstructionResult result;
  result.raw_estimate = from_parameters(x);
  result.rank = rank;
  result.residual_norm = (map.matrix * x - y).norm();
  result.map_condition = rank > 0 ? s(0) / s(rank - 1) : INFINITY;
  result.physical_estimate = nearest_physical(result.raw_estimate);
  return result;
}

std::vector<TrialRecord> run_trials(const RotationSet& set, double noise_sigma, int trials,
                                    std::uint64_t seed, int workers, bool allow_rank_deficient) {
  if (trials < 1) throw std::invalid_argument("trial count must be positive");
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
  const MeasurementMap map = measurement_map(set);
  std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
  auto run_one = [&](int k) {
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(k);
    const DensityMatrix truth = random_density(trial_seed);
    const auto readings = simulate_experiment(truth, set, noise_sigma, splitmix64(trial_seed));
    const auto result = reconstruct(readings, map, allow_rank_deficient);
    TrialRecord& rec = records[static_cast<std::size_t>(k)];
    rec.trial = k;
    rec.set_name = set.name;
    rec.noise_sigma = noise_sigma;
    rec.frobenius_error_raw = frobenius_distance(result.raw_estimate, truth.matrix());
    rec.frobenius_error_physical = frobenius_distance(result.physical_estimate.matrix(), truth.matrix());
    rec.residual_norm = result.residual_norm;
  };
  workers = std::max(1, std::min(workers, trials));
  if (workers == 1) {
    for (int k = 0; k < trials; ++k) run_one(k);
    return records;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int k = w; k < trials; k += workers) {
        try {
          run_one(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace quartit::tomography
