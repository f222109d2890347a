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

// Measurement strategies for the detector network. Every strategy returns a
// report pairing its closed-form success probability with the value obtained
// by evaluating the explicit POVM on the explicit hypothesis states.
//
// Which-detector problems use uniform priors. The complement of the span
// of the hypothesis POVM elements is always appended as an extra element;
// it is the failure outcome for unambiguous schemes and carries zero
// weight for minimum-error and PGM schemes.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qsnet/network.hpp"
#include "qsnet/povm.hpp"
#include "qsnet/tensor.hpp"

namespace qsnet {

enum class ProbeFamily { kEntangled, kSeparable };

std::string to_string(ProbeFamily family);

// Largest register built explicitly in the full 2^N space.
inline constexpr int kFullSpaceMaxN = kMaxQubits;
// Largest ensemble handled by dense Gram-space linear algebra.
inline constexpr int kGramDenseMaxN = 512;
// Largest dimension at which rho is diagonalized directly; above it rho is
// compressed onto an orthonormal basis of the ensemble's span first.
inline constexpr std::size_t kDenseRhoMaxDim = 256;

struct ReportParameters {
  int n = 0;
  std::optional<int> k;
  double theta = 0.0;
  std::vector<double> priors;
  std::optional<double> p;
  std::string probe;
};

struct DiscriminationReport {
  std::string strategy;
  double closed_form_success = 0.0;
  double numeric_success = 0.0;
  double failure_prob = 0.0;
  double error_prob = 0.0;
  double abs_diff = 0.0;
  ReportParameters parameters;
  /// theta = 0: hypotheses coincide; success is the best-prior guess.
  bool degenerate = false;
  bool closed_form_available = true;
  bool numeric_available = true;
  std::vector<std::string> notes;
};

/// Which hypothesis (class) a POVM element announces.
struct Outcome {
  enum class Kind { kHypothesis, kFailure, kUnassigned };
  Kind kind = Kind::kUnassigned;
  std::size_t hypothesis = 0;

  static Outcome hypothesis_of(std::size_t h) { return {Kind::kHypothesis, h}; }
  static Outcome failure() { return {Kind::kFailure, 0}; }
  static Outcome unassigned() { return {Kind::kUnassigned, 0}; }
};
using OutcomeMap = std::vector<Outcome>;

struct StrategyResult {
  DiscriminationReport report;
  std::optional<Povm> povm;
  /// States the POVM acts on (full register or span coordinates).
  std::optional<HypothesisEnsemble> ensemble;
  OutcomeMap outcome_map;
  /// ensemble index -> hypothesis class announced by a correct outcome.
  std::vector<std::size_t> hypothesis_class;
};

struct Probabilities {
  double success = 0.0;
  double failure = 0.0;
  double error = 0.0;
};

/// Born-rule evaluation used by the strategies themselves. An empty
/// `hypothesis_class` means the identity assignment.
Probabilities evaluate_povm(const HypothesisEnsemble& ensemble, const Povm& povm,
                            const OutcomeMap& outcome_map,
                            const std::vector<std::size_t>& hypothesis_class = {});

// ---- two detectors, which one fired ---------------------------------------

StrategyResult min_error_two_detector(double theta);
StrategyResult unambiguous_two_detector(double theta);

// ---- two detectors, one or none ---------------------------------------------

/// Closed-form trace norm of p0 rho0 - p1 rho1 for the uniform product probe.
double one_or_none_trace_norm_closed(double p0, double theta);
double one_or_none_success_closed(double p0, double theta);
/// p0 rho0 - (1 - p0) rho1 in the full 4-dim space.
DenseOperator one_or_none_lambda(double p0, double theta);
StrategyResult one_or_none(double p0, double theta);

/// dP_s/dtheta at theta -> 0+, from central differences at theta = 1e-3 and
/// 2e-3 extrapolated linearly to zero.
double small_theta_sensitivity(double p0);

// ---- N detectors -------------------------------------------------------------

struct PgmScalars {
  double r0 = 0.0;
  double r1 = 0.0;
  double t = 0.0;   // sqrt(r1 / r0)
  double d0 = 0.0;  // [p + (1-p) r0]^{-1/2}, p as given (0 when unused)
  double d1 = 0.0;  // [(1-p) r1]^{-1/2}; +inf when (1-p) r1 = 0
};

/// r0, r1 for the balanced symmetric probe (entangled) or the product probe.
/// Odd N with the entangled probe derives r0, r1 from the numerically
/// evaluated Gram matrix of the explicit states.
PgmScalars pgm_symmetric_scalars(int n, double theta, ProbeFamily family, double p = 0.0);

double pgm_symmetric_closed(int n, double theta);  // (1/N)(sqrt r0 + (N-1) sqrt r1)^2
/// Separable success read with the two displayed lines joined by "+".
double pgm_separable_closed(int n, double theta);
/// First displayed line alone, i.e. the printed "=" taken as an equality.
double pgm_separable_first_line(int n, double theta);
/// Second displayed line alone.
double pgm_separable_second_line(int n, double theta);

StrategyResult pgm_symmetric(int n, double theta, ProbeFamily family);

/// 1 - N (1 - cos 2 theta) / (2 (N - 1)).
double unambiguous_symmetric_failure_closed(int n, double theta);
StrategyResult unambiguous_symmetric(int n, double theta);

double pgm_with_null_closed(int n, double theta, double p);
StrategyResult pgm_with_null(int n, double theta, double p);

// ---- generic PGM ----------------------------------------------------------------

enum class PgmRoute { kAuto, kFullSpace, kGramSpace };

/// Pi_j = p_j rho^{-1/2}|phi_j><phi_j|rho^{-1/2} plus the complement.
/// kFullSpace works on the register vectors; kGramSpace on coordinates of
/// the states in an orthonormal basis of their span (columns of G^{1/2}).
StrategyResult pgm_numeric(const HypothesisEnsemble& ensemble, PgmRoute route = PgmRoute::kAuto);

/// PGM success from a Gram matrix and priors (dense Gram-space route).
double pgm_gram_success(const DenseOperator& gram_matrix, const std::vector<double>& priors);

/// Eigenvalues of a circulant Hermitian matrix given its first row, by DFT.
std::vector<double> circulant_eigenvalues(const std::vector<Complex>& first_row);
/// True when every row is the cyclic shift of the first, within `tol`.
bool is_circulant(const Matrix& m, double tol = tolerance::kStructural);
/// PGM success of an equiprobable ensemble with circulant Gram matrix,
/// (sum_k sqrt lambda_k)^2 / N^2.
double pgm_circulant_success(const DenseOperator& gram_matrix);

// ---- limits and baselines -------------------------------------------------------

enum class AsymptoticVariant { kEntangledExpansion, kSeparableExpansion, kPgmLimit, kUnambiguousLimit, kNullLimit };

double asymptotic_success(int n, double theta, AsymptoticVariant variant, double p = 0.0);

/// 1/N without the null hypothesis, max(p, (1-p)/N) with it.
double guessing_baseline(int n, std::optional<double> p = std::nullopt);

}  // namespace qsnet
