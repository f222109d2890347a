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

// Brute-force verification. Probabilities here are recomputed from dense
// operators wherever the register is small enough, independently of the
// factored forms the strategies use.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qsnet/discrimination.hpp"
#include "qsnet/network.hpp"
#include "qsnet/povm.hpp"

namespace qsnet {

struct RecordParameters {
  std::optional<int> n;
  std::optional<int> k;
  std::optional<double> theta;
  std::optional<double> p;

  auto operator<=>(const RecordParameters&) const = default;
};

struct VerificationRecord {
  std::string check_name;
  RecordParameters parameters;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool skipped = false;
  std::string note;
};

/// Fills `passed` from |expected - observed| <= tolerance.
VerificationRecord make_record(std::string check_name, RecordParameters parameters, double expected,
                               double observed, double tolerance, std::string note = {});
VerificationRecord skipped_record(std::string check_name, RecordParameters parameters, std::string reason);

namespace verify_tolerance {
inline constexpr double kClosedForm = 1e-9;
inline constexpr double kOptimizer = 1e-6;
inline constexpr double kFiniteDifference = 1e-4;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kExactZero = 1e-12;
// Exploratory records: data only, always pass.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();
}  // namespace verify_tolerance

/// One positivity record per element plus one completeness record.
std::vector<VerificationRecord> validate_povm(const Povm& povm, std::size_t dim);

/// Born-rule probabilities from dense effects when dim <= the dense
/// completeness cap, from the stored factors otherwise.
Probabilities numeric_probabilities(const HypothesisEnsemble& ensemble, const Povm& povm,
                                    const OutcomeMap& outcome_map,
                                    const std::vector<std::size_t>& hypothesis_class = {});

/// Separable PGM success from brute force against both readings of the
/// two-line closed form. `expected` is the brute-force value, `observed` the
/// "+" reading; the note names the reading(s) that match.
VerificationRecord resolve_separable_reading(int n, double theta);

/// |<E0|H~>| against 1, and sum_j |<e_j|E0>|^2 against 1.
std::vector<VerificationRecord> verify_null_state_relation(int n, double theta);

enum class SearchObjective { kWhichDetectorPairwise, kOneOrNoneOverlap };

struct ProbeSearchResult {
  /// N = 2: excess of the best probe over the reference, must be <= tolerance.
  /// N >= 3: best value against the symmetric-family reference, data only.
  VerificationRecord record;
  double best_value = 0.0;
  double reference_value = 0.0;
  Vector best_probe;
};

inline constexpr std::uint64_t kDefaultSearchSeed = 20240601;

/// which_detector_pairwise maximizes the worst pairwise two-state
/// minimum-error success; one_or_none_overlap minimizes max_j |<psi|F_j|psi>|.
/// `budget` is the number of random restarts.
ProbeSearchResult probe_search(int n, double theta, SearchObjective objective, int budget,
                               std::uint64_t seed = kDefaultSearchSeed);

struct VerificationGrid {
  std::vector<int> n_values;
  std::vector<double> theta_values;
  std::vector<double> p_values;
  int search_budget = 50;

  static VerificationGrid quick();
  static VerificationGrid standard();
  static VerificationGrid deep();
  /// "quick", "default", "deep"; nullopt for anything else.
  static std::optional<VerificationGrid> preset(const std::string& name);
};

/// Every closed-form-vs-brute-force comparison over the grid, sorted by
/// (check_name, parameters). `tolerance_override` replaces every tolerance.
std::vector<VerificationRecord> run_verification_suite(const VerificationGrid& grid,
                                                       std::optional<double> tolerance_override = std::nullopt);

}  // namespace qsnet
