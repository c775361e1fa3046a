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

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quartit/core.hpp"
#include "quartit/pulse.hpp"

namespace quartit::tomography {

// Population differences read from the three one-photon peaks:
// d1 = rho11 - rho00, d2 = rho22 - rho11, d3 = rho33 - rho22.
struct ReadoutTriple {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  std::array<double, 3> values() const { return {d1, d2, d3}; }
  friend bool operator==(const ReadoutTriple&, const ReadoutTriple&) = default;
};

ReadoutTriple readout(const DensityMatrix& rho);

struct RotationSet {
  std::string name;
  std::vector<PulseSequence> rotations;
  bool include_unrotated = true;
};

// R1..R12: X and Y pi/2 rotations on each of the six transitions.
RotationSet set_twelve();
// Six composite rotations mixing one- and two-photon pulses.
RotationSet set_six();

// Real parametrization of a Hermitian 4x4 matrix: the four diagonal entries,
// then Re and then Im of rho01, rho02, rho03, rho12, rho13, rho23.
inline constexpr int kParameterCount = 16;

const std::string& parameter_name(int index);
Matrix4 hermitian_basis(int index);
Eigen::VectorXd to_parameters(const Matrix4& hermitian);
Matrix4 from_parameters(const Eigen::VectorXd& parameters);

// Rows: unrotated d1..d3 (if included), then d1..d3 for each rotation, then
// the trace row. Columns follow the parametrization above.
struct MeasurementMap {
  Eigen::MatrixXd matrix;
  std::vector<std::string> row_labels;
  int rows() const { return static_cast<int>(matrix.rows()); }
};

MeasurementMap measurement_map(const RotationSet& set);

struct Sensitivity {
  int rank = 0;
  double sigma_min = 0.0;  // smallest singular value above the rank threshold
  double sigma_max = 0.0;
  double condition = 0.0;  // sigma_max / sigma_min
};

inline constexpr double kRankThreshold = 1e-10;

Sensitivity sensitivity(const MeasurementMap& map);
Sensitivity sensitivity(const RotationSet& set);

// One triple per measurement (unrotated first when included), each component
// perturbed by independent N(0, noise_sigma^2) noise.
std::vector<ReadoutTriple> simulate_experiment(const DensityMatrix& rho, const RotationSet& set,
                                               double noise_sigma, std::uint64_t seed);

class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(int rank, std::vector<std::string> unresolved);
  int rank() const { return rank_; }
  const std::vector<std::string>& unresolved_parameters() const { return unresolved_; }

 private:
  int rank_;
  std::vector<std::string> unresolved_;
};

struct ReconstructionResult {
  Matrix4 raw_estimate;
  DensityMatrix physical_estimate = DensityMatrix::maximally_mixed();
  double residual_norm = 0.0;
  double map_condition = 0.0;
  int rank = 0;
};

// SVD least squares of M x = y with the trace row fixed to 1. Throws
// RankDeficientError unless allow_rank_deficient, in which case the
// minimum-norm solution is returned.
ReconstructionResult reconstruct(const std::vector<ReadoutTriple>& readings, const MeasurementMap& map,
                                 bool allow_rank_deficient = false);

// Parameters whose direction lies (partly) in the null space of the map.
std::vector<std::string> unresolved_parameters(const MeasurementMap& map);

struct TrialRecord {
  int trial = 0;
  std::string set_name;
  double noise_sigma = 0.0;
  double frobenius_error_raw = 0.0;
  double frobenius_error_physical = 0.0;
  double residual_norm = 0.0;
};

// Trial k draws its state from random_density(seed + k) and its noise from a
// stream derived from the same value, so results do not depend on `workers`.
std::vector<TrialRecord> run_trials(const RotationSet& set, double noise_sigma, int trials,
                                    std::uint64_t seed, int workers = 1,
                                    bool allow_rank_deficient = false);

double median(std::vector<double> values);

}  // namespace quartit::tomography
