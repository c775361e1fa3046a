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

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "quartit/dynamics.hpp"

namespace quartit::dynamics {

namespace {

// y = exp(-rate t) (a cos(w t) + b sin(w t)) + offset
struct Model {
  double a = 0.0;
  double b = 0.0;
  double w = 0.0;
  double rate = 0.0;
  double offset = 0.0;

  Eigen::Matrix<double, 5, 1> packed() const { return {a, b, w, rate, offset}; }
  static Model unpack(const Eigen::Matrix<double, 5, 1>& p) { return {p(0), p(1), p(2), p(3), p(4)}; }
};

struct Data {
  Eigen::VectorXd t;
  Eigen::VectorXd y;
};

Eigen::VectorXd residuals(const Model& m, const Data& d) {
  Eigen::VectorXd r(d.t.size());
  for (Eigen::Index i = 0; i < d.t.size(); ++i) {
    const double t = d.t(i);
    const double e = std::exp(-m.rate * t);
    r(i) = e * (m.a * std::cos(m.w * t) + m.b * std::sin(m.w * t)) + m.offset - d.y(i);
  }
  return r;
}

Eigen::MatrixXd jacobian(const Model& m, const Data& d) {
  Eigen::MatrixXd j(d.t.size(), 5);
  for (Eigen::Index i = 0; i < d.t.size(); ++i) {
    const double t = d.t(i);
    const double e = std::exp(-m.rate * t);
    const double c = std::cos(m.w * t);
    const double s = std::sin(m.w * t);
    const double osc = m.a * c + m.b * s;
    j(i, 0) = e * c;
    j(i, 1) = e * s;
    j(i, 2) = e * t * (-m.a * s + m.b * c);
    j(i, 3) = -t * e * osc;
    j(i, 4) = 1.0;
  }
  return j;
}

// Best (a, b, offset) for fixed frequency and rate; returns the squared error.
double linear_fit(Model& m, const Data& d) {
  Eigen::MatrixXd basis(d.t.size(), 3);
  for (Eigen::Index i = 0; i < d.t.size(); ++i) {
    const double t = d.t(i);
    const double e = std::exp(-m.rate * t);
    basis(i, 0) = e * std::cos(m.w * t);
    basis(i, 1) = e * std::sin(m.w * t);
    basis(i, 2) = 1.0;
  }
  const Eigen::Vector3d coef = basis.colPivHouseholderQr().solve(d.y);
  m.a = coef(0);
  m.b = coef(1);
  m.offset = coef(2);
  return (basis * coef - d.y).squaredNorm();
}

double periodogram_peak(const Data& d, double duration) {
  const Eigen::Index n = d.t.size();
  const double mean = d.y.mean();
  const double nyquist = std::numbers::pi * static_cast<double>(n - 1) / duration;
  const double spacing = duration / static_cast<double>(n - 1);
  bool uniform = true;
  for (Eigen::Index i = 1; i < n && uniform; ++i) {
    uniform = std::abs(d.t(i) - d.t(i - 1) - spacing) <= 1e-6 * spacing;
  }
  auto power = [&](double w) {
    std::complex<double> sum = 0.0;
    if (uniform) {
      const std::complex<double> rotator = std::polar(1.0, w * spacing);
      std::complex<double> z = 1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        sum += (d.y(i) - mean) * z;
        z *= rotator;
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) sum += (d.y(i) - mean) * std::polar(1.0, w * d.t(i));
    }
    return std::norm(sum);
  };
  const double coarse = std::numbers::pi / (2.0 * duration);
  double best_w = coarse, best_p = -1.0;
  for (double w = coarse; w < nyquist; w += coarse) {
    const double p = power(w);
    if (p > best_p) {
      best_p = p;
      best_w = w;
    }
  }
  const double centre = best_w;
  for (int k = -20; k <= 20; ++k) {
    const double w = centre + coarse * k / 20.0;
    if (w <= 0.0) continue;
    const double p = power(w);
    if (p > best_p) {
      best_p = p;
      best_w = w;
    }
  }
  return best_w;
}

}  // namespace

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw std::invalid_argument("time and value arrays differ in length");
  if (t.size() < 16) throw std::invalid_argument("fit_decay needs at least 16 samples");
  Data d{Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size())),
         Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()))};
  const double t0 = d.t(0);
  d.t.array() -= t0;
  const double duration = d.t(d.t.size() - 1);
  if (!(duration > 0.0)) throw std::invalid_argument("time axis must be increasing");

  Model model;
  model.w = periodogram_peak(d, duration);
  if (model.w * duration / (2.0 * std::numbers::pi) < 3.0) {
    throw std::invalid_argument("series contains fewer than 3 oscillation periods");
  }

  // Decay-rate grid: zero plus a log grid spanning 0.01 to 100 inverse durations.
  double best = std::numeric_limits<double>::infinity();
  Model seeded = model;
  for (int k = -1; k <= 40; ++k) {
    Model trial = model;
    trial.rate = k < 0 ? 0.0 : std::pow(10.0, -2.0 + 4.0 * k / 40.0) / duration;
    const double err = linear_fit(trial, d);
    if (err < best) {
      best = err;
      seeded = trial;
    }
  }

  Model current = seeded;
  double cost = residuals(current, d).squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  int iteration = 0;
  const double scale = std::max(1e-300, d.y.squaredNorm());
  for (; iteration < 500; ++iteration) {
    const Eigen::VectorXd r = residuals(current, d);
    const Eigen::MatrixXd j = jacobian(current, d);
    const Eigen::Matrix<double, 5, 5> jtj = j.transpose() * j;
    const Eigen::Matrix<double, 5, 1> g = j.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      Eigen::Matrix<double, 5, 5> a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
      const Eigen::Matrix<double, 5, 1> step = a.ldlt().solve(-g);
      const Model candidate = Model::unpack(current.packed() + step);
      const double candidate_cost = residuals(candidate, d).squaredNorm();
      if (std::isfinite(candidate_cost) && candidate_cost <= cost) {
        const double drop = cost - candidate_cost;
        current = candidate;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        const double relative_step =
            step.cwiseAbs().cwiseQuotient(current.packed().cwiseAbs().cwiseMax(1e-12)).maxCoeff();
        if (drop <= 1e-15 * std::max(cost, 1e-30) || relative_step < 1e-12 ||
            candidate_cost <= 1e-28 * scale) {
          converged = true;
        }
        cost = candidate_cost;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) {
      // No descent direction left: at a minimum to working precision.
      converged = true;
    }
    if (converged) break;
  }

  const double rms = std::sqrt(cost / static_cast<double>(d.t.size()));
  if (!converged) throw FitError("fit_decay did not converge", rms);

  DecayFit fit;
  fit.rabi_estimate = std::abs(current.w);
  fit.amplitude = std::hypot(current.a, current.b);
  fit.phase = std::atan2(-current.b, current.a);
  if (current.w < 0) fit.phase = -fit.phase;
  fit.offset = current.offset;
  fit.rms_residual = rms;
  fit.iterations = iteration + 1;
  fit.t2_estimate = current.rate > 0.0 ? 1.0 / current.rate : std::numeric_limits<double>::infinity();
  fit.decay_resolved = fit.t2_estimate < 100.0 * duration;
  return fit;
}

DecayFit fit_decay(const TimeSeries& series) {
  std::vector<double> t, y;
  t.reserve(series.samples.size());
  y.reserve(series.samples.size());
  for (const auto& s : series.samples) {
    t.push_back(s.t);
    y.push_back(s.mz);
  }
  return fit_decay(t, y);
}

}  // namespace quartit::dynamics
