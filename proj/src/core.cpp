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

#include "quartit/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace quartit {

namespace {

void check_level(int index) {
  if (index < 0 || index >= kLevels) {
    throw std::invalid_argument("level index " + std::to_string(index) + " outside 0..3");
  }
}

Eigen::Vector4d hermitian_eigenvalues(const Matrix4& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// Matrix square root of a positive semidefinite Hermitian matrix.
Matrix4 psd_sqrt(const Matrix4& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(m);
  Eigen::Vector4d roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.cast<Complex>().asDiagonal() *
         solver.eigenvectors().adjoint();
}

double wrap_phase(double phase) {
  constexpr double pi = std::numbers::pi;
  while (phase <= -pi) phase += 2.0 * pi;
  while (phase > pi) phase -= 2.0 * pi;
  return phase;
}

// Euclidean projection onto {p : p_i >= 0, sum p_i = 1} for input already
// summing to one. Zeroes the most negative entries one by one and spreads
// the accumulated deficit evenly over the rest.
Eigen::Vector4d project_spectrum(Eigen::Vector4d values_ascending) {
  std::array<double, 4> v{};
  for (int i = 0; i < 4; ++i) v[i] = values_ascending(3 - i);  // descending
  int last = 3;
  double deficit = 0.0;
  while (last >= 0 && v[last] + deficit / (last + 1) < 0.0) {
    deficit += v[last];
    v[last] = 0.0;
    --last;
  }
  for (int j = 0; j <= last; ++j) v[j] += deficit / (last + 1);
  Eigen::Vector4d out;
  for (int i = 0; i < 4; ++i) out(3 - i) = v[i];
  return out;
}

}  // namespace

double spin_projection(int index) {
  check_level(index);
  return kSpin - index;
}

LogicalEncoding LogicalEncoding::from_index(int index) {
  check_level(index);
  return LogicalEncoding{index, kSpin - index, index / 2, index % 2};
}

LogicalEncoding LogicalEncoding::from_bits(int bit_a, int bit_b) {
  if ((bit_a != 0 && bit_a != 1) || (bit_b != 0 && bit_b != 1)) {
    throw std::invalid_argument("logical bits must be 0 or 1");
  }
  return from_index(2 * bit_a + bit_b);
}

LogicalEncoding LogicalEncoding::from_spin(double m) {
  const double index = kSpin - m;
  const double rounded = std::round(index);
  if (std::abs(index - rounded) > 1e-12 || rounded < 0 || rounded > 3) {
    throw std::invalid_argument("spin projection must be one of 3/2, 1/2, -1/2, -3/2");
  }
  return from_index(static_cast<int>(rounded));
}

QuartitState::QuartitState(const Vector4& amplitudes) : amplitudes_(amplitudes) {
  if (!amplitudes.allFinite() || std::abs(amplitudes.squaredNorm() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("quartit state amplitudes must have unit norm");
  }
}

QuartitState QuartitState::basis(int index) {
  check_level(index);
  Vector4 v = Vector4::Zero();
  v(index) = 1.0;
  return QuartitState(v);
}

DensityMatrix::DensityMatrix(const Matrix4& rho) : rho_(rho) {
  if (!rho.allFinite()) throw std::invalid_argument("density matrix has non-finite entries");
  if (!is_hermitian(rho, kHermitianTolerance)) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os << "density matrix trace " << trace << " differs from 1";
    throw std::invalid_argument(os.str());
  }
  const double smallest = hermitian_eigenvalues(rho).minCoeff();
  if (smallest < kEigenvalueFloor) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << smallest;
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix DensityMatrix::from_populations(const std::array<double, 4>& p) {
  Matrix4 rho = Matrix4::Zero();
  for (int i = 0; i < 4; ++i) rho(i, i) = p[i];
  return DensityMatrix(rho);
}

DensityMatrix DensityMatrix::pure(const QuartitState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Matrix4::Identity() * 0.25);
}

std::array<double, 4> DensityMatrix::populations() const {
  return {rho_(0, 0).real(), rho_(1, 1).real(), rho_(2, 2).real(), rho_(3, 3).real()};
}

Eigen::Vector4d DensityMatrix::eigenvalues() const { return hermitian_eigenvalues(rho_); }

UnitaryOperator::UnitaryOperator(const Matrix4& u) : u_(u) {
  if (!u.allFinite() || !is_unitary(u, kUnitaryTolerance)) {
    throw std::invalid_argument("operator is not unitary");
  }
}

UnitaryOperator UnitaryOperator::identity() { return UnitaryOperator(Matrix4::Identity()); }

UnitaryOperator UnitaryOperator::adjoint() const { return UnitaryOperator(u_.adjoint()); }

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  return UnitaryOperator(a.u_ * b.u_);
}

UnitaryOperator operator*(Complex phase, const UnitaryOperator& u) {
  return UnitaryOperator(phase * u.u_);
}

bool is_unitary(const Matrix4& m, double tolerance) {
  return max_abs(m.adjoint() * m - Matrix4::Identity()) <= tolerance;
}

bool is_hermitian(const Matrix4& m, double tolerance) {
  return max_abs(m - m.adjoint()) <= tolerance;
}

double max_abs(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

const SpinOperators& spin_operators() {
  static const SpinOperators ops = [] {
    SpinOperators s;
    Matrix4 raise = Matrix4::Zero();
    s.iz = Matrix4::Zero();
    for (int i = 0; i < 4; ++i) {
      const double m = spin_projection(i);
      s.iz(i, i) = m;
      // I+ |m> = sqrt(I(I+1) - m(m+1)) |m+1>, and |m+1> sits at index i-1.
      if (i > 0) raise(i - 1, i) = std::sqrt(kSpin * (kSpin + 1) - m * (m + 1));
    }
    const Matrix4 lower = raise.adjoint();
    s.ix = 0.5 * (raise + lower);
    s.iy = Complex(0.0, -0.5) * (raise - lower);
    return s;
  }();
  return ops;
}

double mz(const DensityMatrix& rho) {
  double total = 0.0;
  for (int i = 0; i < 4; ++i) total += spin_projection(i) * rho(i, i).real();
  return total;
}

DensityMatrix random_density(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix4 g;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  Matrix4 rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix nearest_physical(const Matrix4& hermitian) {
  if (!hermitian.allFinite() || !is_hermitian(hermitian, kProjectionHermitianTolerance)) {
    throw std::invalid_argument("nearest_physical requires a Hermitian matrix");
  }
  Matrix4 h = 0.5 * (hermitian + hermitian.adjoint());
  const double trace = h.trace().real();
  if (std::abs(trace) < 1e-14) {
    throw std::invalid_argument("nearest_physical requires a matrix with nonzero trace");
  }
  h /= trace;
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(h);
  const Eigen::Vector4d values = solver.eigenvalues();
  if (values.minCoeff() >= 0.0) return DensityMatrix(h);
  const Eigen::Vector4d projected = project_spectrum(values);
  Matrix4 rho = solver.eigenvectors() * projected.cast<Complex>().asDiagonal() *
                solver.eigenvectors().adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

std::string_view to_string(EquivalenceTag tag) {
  switch (tag) {
    case EquivalenceTag::exact: return "exact";
    case EquivalenceTag::global_phase: return "global_phase";
    case EquivalenceTag::diagonal_phase: return "diagonal_phase";
    case EquivalenceTag::sign_flips: return "sign_flips";
    case EquivalenceTag::mismatch: return "mismatch";
  }
  return "mismatch";
}

EquivalenceTag equivalence_tag_from_string(std::string_view name) {
  for (auto tag : {EquivalenceTag::exact, EquivalenceTag::global_phase,
                   EquivalenceTag::diagonal_phase, EquivalenceTag::sign_flips,
                   EquivalenceTag::mismatch}) {
    if (to_string(tag) == name) return tag;
  }
  throw std::invalid_argument("unknown equivalence tag '" + std::string(name) + "'");
}

EquivalenceClass equivalence_class(const UnitaryOperator& u_op, const UnitaryOperator& v_op,
                                   double tolerance) {
  const Matrix4& u = u_op.matrix();
  const Matrix4& v = v_op.matrix();
  EquivalenceClass out;

  const double exact_residual = max_abs(u - v);
  if (exact_residual <= tolerance) {
    out.tag = EquivalenceTag::exact;
    out.residual = exact_residual;
    return out;
  }

  // Anchor the phase on the largest entry of V (first in row-major order).
  Eigen::Index ar = 0, ac = 0;
  v.cwiseAbs().maxCoeff(&ar, &ac);
  const double phase = std::arg(u(ar, ac) * std::conj(v(ar, ac)));
  const double global_residual = max_abs(u - std::polar(1.0, phase) * v);
  if (global_residual <= tolerance) {
    out.tag = EquivalenceTag::global_phase;
    out.residual = global_residual;
    out.phase = wrap_phase(phase);
    return out;
  }

  std::vector<EntryPosition> flips;
  bool elementwise_signs = true;
  double sign_residual = 0.0;
  for (int r = 0; r < 4 && elementwise_signs; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double same = std::abs(u(r, c) - v(r, c));
      const double flipped = std::abs(u(r, c) + v(r, c));
      if (same <= tolerance) {
        sign_residual = std::max(sign_residual, same);
      } else if (flipped <= tolerance) {
        sign_residual = std::max(sign_residual, flipped);
        flips.push_back({r, c});
      } else {
        elementwise_signs = false;
        break;
      }
    }
  }
  if (elementwise_signs && !flips.empty()) {
    out.tag = EquivalenceTag::sign_flips;
    out.residual = sign_residual;
    out.sign_flips = std::move(flips);
    return out;
  }

  Matrix4 row_phased = v;
  std::array<double, 4> phases{};
  for (int r = 0; r < 4; ++r) {
    Eigen::Index c = 0;
    v.row(r).cwiseAbs().maxCoeff(&c);
    phases[r] = wrap_phase(std::arg(u(r, c) * std::conj(v(r, c))));
    row_phased.row(r) *= std::polar(1.0, phases[r]);
  }
  const double diagonal_residual = max_abs(u - row_phased);
  if (diagonal_residual <= tolerance) {
    out.tag = EquivalenceTag::diagonal_phase;
    out.residual = diagonal_residual;
    out.diagonal_phases = phases;
    return out;
  }

  out.tag = EquivalenceTag::mismatch;
  out.residual = std::min({exact_residual, global_residual, diagonal_residual});
  return out;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const Matrix4 root = psd_sqrt(rho.matrix());
  Matrix4 inner = root * sigma.matrix() * root;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  const double overlap = hermitian_eigenvalues(inner).cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(overlap * overlap, 0.0, 1.0);
}

double frobenius_distance(const Matrix4& a, const Matrix4& b) { return (a - b).norm(); }

}  // namespace quartit
