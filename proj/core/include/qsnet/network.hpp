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

// Detector network model: the single-qubit phase channel, probe states,
// hypothesis ensembles and the closed-form overlaps between them.

#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "qsnet/tensor.hpp"

namespace qsnet {

inline constexpr double kMaxTheta = std::numbers::pi / 4.0;

/// U = diag(e^{i theta}, e^{-i theta}) in the {|u+>, |u->} basis,
/// with |theta| <= pi/4.
class PhaseChannel {
 public:
  /// Throws std::out_of_range outside [-pi/4, pi/4].
  explicit PhaseChannel(double theta);

  double theta() const { return theta_; }
  DenseOperator unitary() const;

  /// F_site |state>.
  Ket apply(const Ket& state, int site, int n_sites) const;

  /// Reduces `theta` modulo pi (the eigenphase pair is only defined up to a
  /// global phase). Returns the representative when it lies in range,
  /// nullopt otherwise. Never rewrites the caller's value.
  static std::optional<double> equivalent_in_range(double theta);

 private:
  double theta_;
};

enum class ProbeKind { kSymmetric, kSeparable, kTwoDetectorOptimal, kCustom };

struct ProbeSpec {
  ProbeKind kind = ProbeKind::kSymmetric;
  int n = 2;
  int k = 1;
  Vector coefficients;  // kCustom only

  static ProbeSpec symmetric(int n, int k);
  /// k = floor(n/2).
  static ProbeSpec symmetric_balanced(int n);
  static ProbeSpec separable(int n);
  static ProbeSpec two_detector_optimal();
  static ProbeSpec custom(Vector coefficients);
};

/// |k;N>, the product state, or the two-detector optimum.
Ket build_probe(const ProbeSpec& spec);

/// Candidate post-interaction states with prior probabilities. When
/// `includes_null` is set, index 0 is the untouched probe.
struct HypothesisEnsemble {
  std::vector<Ket> states;
  std::vector<double> priors;
  bool includes_null = false;

  HypothesisEnsemble(std::vector<Ket> states, std::vector<double> priors, bool includes_null = false);

  std::size_t size() const { return states.size(); }
  std::size_t dim() const { return states.front().dim(); }
};

/// [probe if include_null] ++ [F_n probe for n = 1..N]. Priors are
/// [p, (1-p)/N, ...] with the null state, uniform 1/N without.
HypothesisEnsemble hypothesis_states(const Ket& probe, const PhaseChannel& channel,
                                     bool include_null = false, double null_prior = 0.0);

/// <k;N| F_n^dagger F_m |k;N> for n != m.
double symmetric_overlap_closed(int n, int k, double theta);

/// Off-diagonal overlap for the product probe, 1 - (1 - cos 2 theta)/2.
double separable_overlap_closed(double theta);

/// N x N Gram matrix with unit diagonal and constant off-diagonal `overlap`.
DenseOperator equicorrelated_gram(int n, double overlap);

/// Two-detector probe amplitudes together with the overlap
/// z = <psi|U (x) U^{-1}|psi> they produce at `theta`.
class TriangleCoefficients {
 public:
  /// Normalizes the four amplitudes; z is computed from the normalized values.
  TriangleCoefficients(Complex c_pp, Complex c_pm, Complex c_mp, Complex c_mm, double theta);

  Complex c_pp() const { return c_[0]; }
  Complex c_pm() const { return c_[1]; }
  Complex c_mp() const { return c_[2]; }
  Complex c_mm() const { return c_[3]; }
  double theta() const { return theta_; }
  Complex z() const { return z_; }

  /// Amplitudes in basis order |++>, |+->, |-+>, |-->.
  Vector as_vector() const;

 private:
  Complex c_[4];
  double theta_;
  Complex z_;
};

/// Seeded random restarts of a projected-gradient descent on |z|^2 over the
/// simplex of squared amplitudes. Returned amplitudes are the real square
/// roots of the optimal weights. Throws std::invalid_argument for theta = 0
/// or restarts < 1.
TriangleCoefficients minimize_two_detector_overlap(const PhaseChannel& channel, int restarts,
                                                   std::uint64_t seed);

/// (<psi|U (x) I|psi>, <psi|I (x) U|psi>).
std::pair<Complex, Complex> one_or_none_overlaps(const TriangleCoefficients& coefficients,
                                                 double theta);

}  // namespace qsnet
