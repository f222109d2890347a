// Copyright 2026 The qsnet Authors
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

#include "qsnet/network.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace qsnet {

namespace {

// Accepts theta = pi/4 produced by degree conversion or range arithmetic.
constexpr double kThetaSlack = 1e-12;

void require_detectors(int n) {
  if (n < 2) {
    throw std::invalid_argument("detector count N must be >= 2 (got " + std::to_string(n) + ")");
  }
  if (n > kMaxQubits) {
    throw std::invalid_argument("detector count N = " + std::to_string(n) +
                                " exceeds the dense register limit of " +
                                std::to_string(kMaxQubits));
  }
}

}  // namespace

PhaseChannel::PhaseChannel(double theta) : theta_(theta) {
  if (!std::isfinite(theta) || std::abs(theta) > kMaxTheta + kThetaSlack) {
    throw std::out_of_range("theta = " + std::to_string(theta) + " outside [-pi/4, pi/4]");
  }
}

DenseOperator PhaseChannel::unitary() const {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, theta_);
  u(1, 1) = std::polar(1.0, -theta_);
  return DenseOperator(std::move(u), OperatorFlag::kUnitary);
}

Ket PhaseChannel::apply(const Ket& state, int site, int n_sites) const {
  return apply_site_unitary(state, unitary(), site, n_sites);
}

std::optional<double> PhaseChannel::equivalent_in_range(double theta) {
  if (!std::isfinite(theta)) return std::nullopt;
  const double reduced = theta - std::numbers::pi * std::round(theta / std::numbers::pi);
  if (std::abs(reduced) <= kMaxTheta + kThetaSlack) return reduced;
  return std::nullopt;
}

ProbeSpec ProbeSpec::symmetric(int n, int k) {
  ProbeSpec s;
  s.kind = ProbeKind::kSymmetric;
  s.n = n;
  s.k = k;
  return s;
}

ProbeSpec ProbeSpec::symmetric_balanced(int n) { return symmetric(n, n / 2); }

ProbeSpec ProbeSpec::separable(int n) {
  ProbeSpec s;
  s.kind = ProbeKind::kSeparable;
  s.n = n;
  s.k = 0;
  return s;
}

ProbeSpec ProbeSpec::two_detector_optimal() {
  ProbeSpec s;
  s.kind = ProbeKind::kTwoDetectorOptimal;
  s.n = 2;
  s.k = 1;
  return s;
}

ProbeSpec ProbeSpec::custom(Vector coefficients) {
  ProbeSpec s;
  s.kind = ProbeKind::kCustom;
  s.n = coefficients.size() > 0 ? qubit_count(static_cast<std::size_t>(coefficients.size())) : 0;
  s.k = 0;
  s.coefficients = std::move(coefficients);
  return s;
}

Ket build_probe(const ProbeSpec& spec) {
  switch (spec.kind) {
    case ProbeKind::kSymmetric: {
      require_detectors(spec.n);
      if (spec.k < 0 || spec.k > spec.n) {
        throw std::invalid_argument("symmetric probe: k = " + std::to_string(spec.k) +
                                    " outside 0..N");
      }
      const std::uint64_t dim = std::uint64_t{1} << spec.n;
      Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
      // k factors |u+> means k zero bits.
      for (std::uint64_t idx = 0; idx < dim; ++idx) {
        if (std::popcount(idx) == spec.n - spec.k) v(static_cast<Eigen::Index>(idx)) = 1.0;
      }
      return Ket(std::move(v));
    }
    case ProbeKind::kSeparable: {
      require_detectors(spec.n);
      const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << spec.n);
      return Ket(Vector::Constant(dim, Complex(1.0, 0.0)));
    }
    case ProbeKind::kTwoDetectorOptimal:
      return build_probe(ProbeSpec::symmetric(2, 1));
    case ProbeKind::kCustom: {
      if (spec.coefficients.size() < 4) {
        throw std::invalid_argument("custom probe needs at least two qubits of coefficients");
      }
      qubit_count(static_cast<std::size_t>(spec.coefficients.size()));
      return Ket(spec.coefficients);
    }
  }
  throw std::logic_error("build_probe: unknown probe kind");
}

HypothesisEnsemble::HypothesisEnsemble(std::vector<Ket> s, std::vector<double> p, bool null)
    : states(std::move(s)), priors(std::move(p)), includes_null(null) {
  if (states.empty()) {
    throw std::invalid_argument("HypothesisEnsemble: no states");
  }
  if (priors.size() != states.size()) {
    throw std::invalid_argument("HypothesisEnsemble: priors length " +
                                std::to_string(priors.size()) + " != state count " +
                                std::to_string(states.size()));
  }
  double total = 0.0;
  for (double q : priors) {
    if (!(q >= 0.0)) throw std::invalid_argument("HypothesisEnsemble: negative prior");
    total += q;
  }
  if (std::abs(total - 1.0) > tolerance::kNorm) {
    throw std::invalid_argument("HypothesisEnsemble: priors sum to " + std::to_string(total));
  }
  for (const Ket& k : states) {
    if (k.dim() != states.front().dim()) {
      throw std::invalid_argument("HypothesisEnsemble: states have different dimensions");
    }
  }
}

HypothesisEnsemble hypothesis_states(const Ket& probe, const PhaseChannel& channel,
                                     bool include_null, double null_prior) {
  if (!(null_prior >= 0.0 && null_prior <= 1.0)) {
    throw std::invalid_argument("null_prior must lie in [0, 1]");
  }
  const int n = qubit_count(probe.dim());
  if (n < 1) {
    throw std::invalid_argument("hypothesis_states: probe must have at least one qubit");
  }
  const DenseOperator u = channel.unitary();
  std::vector<Ket> states;
  std::vector<double> priors;
  states.reserve(static_cast<std::size_t>(n) + 1);
  if (include_null) {
    states.push_back(probe);
    priors.push_back(null_prior);
  }
  const double each = include_null ? (1.0 - null_prior) / n : 1.0 / n;
  for (int site = 1; site <= n; ++site) {
    states.push_back(apply_site_unitary(probe, u, site, n));
    priors.push_back(each);
  }
  return HypothesisEnsemble(std::move(states), std::move(priors), include_null);
}

double symmetric_overlap_closed(int n, int k, double theta) {
  if (n < 2 || k < 0 || k > n) {
    throw std::invalid_argument("symmetric_overlap_closed: need N >= 2 and 0 <= k <= N");
  }
  const double nn = n;
  return 1.0 - (2.0 * k) * (nn - k) * (1.0 - std::cos(2.0 * theta)) / (nn * (nn - 1.0));
}

double separable_overlap_closed(double theta) {
  return 1.0 - 0.5 * (1.0 - std::cos(2.0 * theta));
}

DenseOperator equicorrelated_gram(int n, double overlap) {
  if (n < 1) throw std::invalid_argument("equicorrelated_gram: N must be positive");
  Matrix g = Matrix::Constant(n, n, Complex(overlap, 0.0));
  g.diagonal().setOnes();
  return DenseOperator(std::move(g), OperatorFlag::kHermitian);
}

TriangleCoefficients::TriangleCoefficients(Complex c_pp, Complex c_pm, Complex c_mp, Complex c_mm,
                                           double theta)
    : c_{c_pp, c_pm, c_mp, c_mm}, theta_(theta) {
  const double norm2 = std::norm(c_pp) + std::norm(c_pm) + std::norm(c_mp) + std::norm(c_mm);
  if (!(norm2 > 0.0)) {
    throw std::invalid_argument("TriangleCoefficients: zero coefficient vector");
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (Complex& c : c_) c *= scale;
  z_ = std::norm(c_[1]) * std::polar(1.0, 2.0 * theta) + (std::norm(c_[0]) + std::norm(c_[3])) +
       std::norm(c_[2]) * std::polar(1.0, -2.0 * theta);
}

Vector TriangleCoefficients::as_vector() const {
  Vector v(4);
  for (int i = 0; i < 4; ++i) v(i) = c_[i];
  return v;
}

namespace {

using Weights = std::array<double, 4>;

// Euclidean projection onto the probability simplex (sort-and-threshold).
Weights project_to_simplex(const Weights& y) {
  Weights sorted = y;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) shift = candidate;
  }
  Weights out{};
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::max(y[i] - shift, 0.0);
  return out;
}

struct TriangleObjective {
  std::array<Complex, 4> vertex;  // z contribution per unit weight: ++, +-, -+, --

  explicit TriangleObjective(double theta)
      : vertex{Complex(1.0, 0.0), std::polar(1.0, 2.0 * theta), std::polar(1.0, -2.0 * theta),
               Complex(1.0, 0.0)} {}

  Complex z(const Weights& w) const {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) acc += w[i] * vertex[i];
    return acc;
  }
  double value(const Weights& w) const { return std::norm(z(w)); }
  Weights gradient(const Weights& w) const {
    const Complex zc = std::conj(z(w));
    Weights g{};
    for (std::size_t i = 0; i < 4; ++i) g[i] = 2.0 * (zc * vertex[i]).real();
    return g;
  }
};

Weights descend(const TriangleObjective& objective, Weights w) {
  constexpr int kMaxIterations = 20000;
  constexpr double kStep = 0.125;  // 1/L with L = 2 * sum |vertex|^2
  for (int it = 0; it < kMaxIterations; ++it) {
    const Weights g = objective.gradient(w);
    Weights trial{};
    for (std::size_t i = 0; i < 4; ++i) trial[i] = w[i] - kStep * g[i];
    trial = project_to_simplex(trial);
    Weights d{};
    double dnorm = 0.0;
    double slope = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      d[i] = trial[i] - w[i];
      dnorm += d[i] * d[i];
      slope += g[i] * d[i];
    }
    if (dnorm < 1e-30 || slope >= 0.0) break;
    // Exact line search on the quadratic along d, clipped to the feasible segment.
    const double curvature = 2.0 * std::norm(objective.z(d));
    double alpha = curvature > 0.0 ? std::clamp(-slope / curvature, 0.0, 1.0) : 1.0;
    for (std::size_t i = 0; i < 4; ++i) w[i] = std::max(w[i] + alpha * d[i], 0.0);
  }
  return w;
}

}  // namespace

TriangleCoefficients minimize_two_detector_overlap(const PhaseChannel& channel, int restarts,
                                                   std::uint64_t seed) {
  if (channel.theta() == 0.0) {
    throw std::invalid_argument(
        "minimize_two_detector_overlap: theta = 0 leaves |z| = 1 for every probe");
  }
  if (restarts < 1) {
    throw std::invalid_argument("minimize_two_detector_overlap: restarts must be >= 1");
  }
  const TriangleObjective objective(channel.theta());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Weights best{};
  double best_value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Weights w{};
    double total = 0.0;
    for (double& x : w) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      x = re * re + im * im;
      total += x;
    }
    for (double& x : w) x /= total;
    w = descend(objective, w);
    const double value = objective.value(w);
    if (value < best_value) {  // strict: ties keep the lowest restart index
      best_value = value;
      best = w;
    }
  }
  return TriangleCoefficients(std::sqrt(best[0]), std::sqrt(best[1]), std::sqrt(best[2]),
                              std::sqrt(best[3]), channel.theta());
}

std::pair<Complex, Complex> one_or_none_overlaps(const TriangleCoefficients& c, double theta) {
  const Complex up = std::polar(1.0, theta);
  const Complex down = std::polar(1.0, -theta);
  const double pp = std::norm(c.c_pp()), pm = std::norm(c.c_pm());
  const double mp = std::norm(c.c_mp()), mm = std::norm(c.c_mm());
  return {(pp + pm) * up + (mp + mm) * down, (pp + mp) * up + (pm + mm) * down};
}

}  // namespace qsnet
