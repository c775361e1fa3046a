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
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace quartit {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4cd;

inline constexpr int kLevels = 4;
inline constexpr double kSpin = 1.5;

// Validation thresholds shared by every module.
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kUnitaryTolerance = 1e-12;
inline constexpr double kProjectionHermitianTolerance = 1e-9;
inline constexpr double kEquivalenceTolerance = 1e-10;

// Level index i <-> spin projection m = 3/2 - i <-> logical bits (A, B) with
// i = 2A + B. Index 0 is |3/2> = |00>, index 3 is |-3/2> = |11>.
struct LogicalEncoding {
  int index = 0;
  double spin_label = kSpin;
  int bit_a = 0;
  int bit_b = 0;

  static LogicalEncoding from_index(int index);
  static LogicalEncoding from_bits(int bit_a, int bit_b);
  static LogicalEncoding from_spin(double m);

  friend bool operator==(const LogicalEncoding&, const LogicalEncoding&) = default;
};

// Spin projection m for a level index.
double spin_projection(int index);

// Normalized pure state c0|0> + c1|1> + c2|2> + c3|3>.
class QuartitState {
 public:
  explicit QuartitState(const Vector4& amplitudes);

  static QuartitState basis(int index);

  const Vector4& amplitudes() const { return amplitudes_; }
  Complex operator[](int i) const { return amplitudes_(i); }

 private:
  Vector4 amplitudes_;
};

class DensityMatrix {
 public:
  // Throws std::invalid_argument unless rho is Hermitian, unit trace and PSD.
  explicit DensityMatrix(const Matrix4& rho);

  static DensityMatrix from_populations(const std::array<double, 4>& p);
  static DensityMatrix pure(const QuartitState& psi);
  static DensityMatrix maximally_mixed();

  const Matrix4& matrix() const { return rho_; }
  Complex operator()(int row, int col) const { return rho_(row, col); }
  std::array<double, 4> populations() const;
  Eigen::Vector4d eigenvalues() const;

 private:
  Matrix4 rho_;
};

class UnitaryOperator {
 public:
  UnitaryOperator() : u_(Matrix4::Identity()) {}
  // Throws std::invalid_argument unless U^dagger U = 1 within kUnitaryTolerance.
  explicit UnitaryOperator(const Matrix4& u);

  static UnitaryOperator identity();

  const Matrix4& matrix() const { return u_; }
  Complex operator()(int row, int col) const { return u_(row, col); }
  UnitaryOperator adjoint() const;

  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);
  friend UnitaryOperator operator*(Complex phase, const UnitaryOperator& u);

 private:
  Matrix4 u_;
};

bool is_unitary(const Matrix4& m, double tolerance = kUnitaryTolerance);
bool is_hermitian(const Matrix4& m, double tolerance = kHermitianTolerance);

// Max elementwise modulus.
double max_abs(const Matrix4& m);

// I = 3/2 angular-momentum matrices in units of hbar, basis m = 3/2 ... -3/2.
struct SpinOperators {
  Matrix4 ix;
  Matrix4 iy;
  Matrix4 iz;
};

const SpinOperators& spin_operators();

// Longitudinal magnetization sum_m m * rho_mm in units of hbar.
double mz(const DensityMatrix& rho);

// Ginibre state G G^dagger / tr(G G^dagger), deterministic per seed.
DensityMatrix random_density(std::uint64_t seed);

// Trace-normalizes a Hermitian matrix and projects its spectrum onto the
// probability simplex. Throws std::invalid_argument for non-Hermitian input
// or input with vanishing trace.
DensityMatrix nearest_physical(const Matrix4& hermitian);

enum class EquivalenceTag { exact, global_phase, diagonal_phase, sign_flips, mismatch };

std::string_view to_string(EquivalenceTag tag);
EquivalenceTag equivalence_tag_from_string(std::string_view name);

struct EntryPosition {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const EntryPosition&, const EntryPosition&) = default;
};

struct EquivalenceClass {
  EquivalenceTag tag = EquivalenceTag::mismatch;
  // Max elementwise deviation of U from the fitted relation applied to V.
  double residual = 0.0;
  // global_phase: U = exp(i phase) V, phase in (-pi, pi].
  double phase = 0.0;
  // diagonal_phase: U = diag(exp(i phases)) V.
  std::array<double, 4> diagonal_phases{};
  // sign_flips: entries where U = -V, row-major order.
  std::vector<EntryPosition> sign_flips;
};

// Classifies U against V, testing in order: exact, global_phase, sign_flips,
// diagonal_phase, mismatch.
EquivalenceClass equivalence_class(const UnitaryOperator& u, const UnitaryOperator& v,
                                   double tolerance = kEquivalenceTolerance);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double frobenius_distance(const Matrix4& a, const Matrix4& b);

}  // namespace quartit
