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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qsnet/discrimination.hpp"
#include "qsnet/oracle.hpp"
#include "test_support.hpp"

namespace qsnet {
namespace {

constexpr double kPi = std::numbers::pi;

bool all_passed(const std::vector<VerificationRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const VerificationRecord& r) { return r.passed; });
}

// ---- records ---------------------------------------------------------------------------

TEST(Records, MakeRecordComparesWithTolerance) {
  EXPECT_TRUE(make_record("x", {}, 1.0, 1.0 + 1e-10, 1e-9).passed);
  EXPECT_FALSE(make_record("x", {}, 1.0, 1.0 + 1e-8, 1e-9).passed);
  EXPECT_TRUE(make_record("x", {}, 1.0, 5.0, verify_tolerance::kUnbounded).passed);
  const VerificationRecord s = skipped_record("y", RecordParameters{.n = 3, .k = {}, .theta = {}, .p = {}}, "odd");
  EXPECT_TRUE(s.skipped);
  EXPECT_EQ(s.note, "odd");
}

// ---- POVM validation --------------------------------------------------------------------

TEST(ValidatePovm, ValidPovmPasses) {
  const StrategyResult r = pgm_symmetric(4, 0.3, ProbeFamily::kEntangled);
  const std::vector<VerificationRecord> records = validate_povm(*r.povm, r.ensemble->dim());
  EXPECT_EQ(records.size(), r.povm->size() + 1);
  EXPECT_TRUE(all_passed(records));
  EXPECT_EQ(records.back().check_name, "povm.completeness");
}

TEST(ValidatePovm, ScaledElementFailsCompleteness) {
  const StrategyResult r = min_error_two_detector(0.3);
  const std::vector<VerificationRecord> records = validate_povm(r.povm->with_scaled_element(0, 1.01), 4);
  const auto completeness = std::find_if(records.begin(), records.end(),
                                         [](const VerificationRecord& v) { return v.check_name == "povm.completeness"; });
  ASSERT_NE(completeness, records.end());
  EXPECT_FALSE(completeness->passed);
  EXPECT_GT(completeness->observed, 1e-3);
}

TEST(ValidatePovm, NegativeElementFailsPositivity) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -0.5;
  const Povm bad({PovmElement::dense(DenseOperator(m, OperatorFlag::kHermitian)),
                  PovmElement::rank_one(Vector::Unit(2, 1), 1.5)});
  const std::vector<VerificationRecord> records = validate_povm(bad, 2);
  EXPECT_FALSE(records[0].passed);
  EXPECT_NEAR(records[0].observed, 0.5, 1e-12);
  EXPECT_TRUE(records[1].passed);
  EXPECT_TRUE(records[2].passed);  // sum is the identity
}

TEST(ValidatePovm, DimensionMismatchFailsCompleteness) {
  const StrategyResult r = min_error_two_detector(0.3);
  const std::vector<VerificationRecord> records = validate_povm(*r.povm, 8);
  EXPECT_FALSE(records.back().passed);
  EXPECT_NE(records.back().note.find("expected 8"), std::string::npos);
}

// ---- probabilities ------------------------------------------------------------------------

TEST(NumericProbabilities, ProjectiveMeasurementOnBasisStates) {
  const HypothesisEnsemble e({Ket::basis(3, 0), Ket::basis(3, 1)}, {0.5, 0.5});
  const Povm povm({PovmElement::rank_one(Vector::Unit(3, 0)), PovmElement::rank_one(Vector::Unit(3, 1)),
                   PovmElement::rank_one(Vector::Unit(3, 2))},
                  2);
  const OutcomeMap map = {Outcome::hypothesis_of(0), Outcome::hypothesis_of(1), Outcome::failure()};
  const Probabilities p = numeric_probabilities(e, povm, map);
  EXPECT_NEAR(p.success, 1.0, 1e-15);
  EXPECT_NEAR(p.failure, 0.0, 1e-15);
  EXPECT_NEAR(p.error, 0.0, 1e-15);
  EXPECT_THROW(numeric_probabilities(e, povm, {Outcome::failure()}), std::invalid_argument);
}

TEST(NumericProbabilities, AgreesWithEvaluatePovm) {
  for (double theta : {0.1, 0.5}) {
    const StrategyResult r = unambiguous_symmetric(6, theta);
    const Probabilities a = numeric_probabilities(*r.ensemble, *r.povm, r.outcome_map);
    const Probabilities b = evaluate_povm(*r.ensemble, *r.povm, r.outcome_map);
    EXPECT_NEAR(a.success, b.success, 1e-12);
    EXPECT_NEAR(a.failure, b.failure, 1e-12);
    EXPECT_NEAR(a.error, b.error, 1e-12);
  }
}

// Rotating states and POVM by the same unitary changes nothing.
TEST(NumericProbabilities, BasisIndependence) {
  std::mt19937_64 rng(7);
  const StrategyResult r = pgm_symmetric(4, 0.4, ProbeFamily::kEntangled);
  const Matrix u = testing::random_unitary(16, rng);
  std::vector<Ket> rotated;
  for (const Ket& k : r.ensemble->states) rotated.emplace_back(u * k.amplitudes());
  std::vector<PovmElement> elements;
  for (const PovmElement& el : r.povm->elements()) {
    const Matrix m = u * el.to_dense() * u.adjoint();
    elements.push_back(PovmElement::dense(DenseOperator(0.5 * (m + m.adjoint()), OperatorFlag::kHermitian)));
  }
  const HypothesisEnsemble e(std::move(rotated), r.ensemble->priors);
  const Probabilities a = numeric_probabilities(e, Povm(std::move(elements)), r.outcome_map);
  EXPECT_NEAR(a.success, r.report.numeric_success, 1e-12);
  EXPECT_NEAR(a.error, r.report.error_prob, 1e-12);
}

// Two pure states with equal priors: the PGM attains the minimum-error bound.
TEST(NumericProbabilities, TwoStatePgmIsMinimumError) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector a = testing::random_vector(5, rng).normalized();
    const Vector b = testing::random_vector(5, rng).normalized();
    const HypothesisEnsemble e({Ket(a), Ket(b)}, {0.5, 0.5});
    const double overlap = std::abs(a.dot(b));
    const double bound = 0.5 * (1.0 + std::sqrt(1.0 - overlap * overlap));
    EXPECT_NEAR(pgm_numeric(e).report.numeric_success, bound, 1e-10);
  }
}

// ---- separable reading -------------------------------------------------------------------------

TEST(SeparableReading, Examples) {
  const VerificationRecord r = resolve_separable_reading(2, kPi / 4);
  EXPECT_NEAR(r.expected, 0.9330127, 1e-7);
  EXPECT_TRUE(r.passed);
  const VerificationRecord six = resolve_separable_reading(6, 0.5);
  EXPECT_TRUE(six.passed);
  EXPECT_NE(six.note.find('+'), std::string::npos);
}

TEST(SeparableReading, TwoDetectorDisplayAgrees) {
  for (double theta : {0.1, 0.3, 0.5, 0.7}) {
    const VerificationRecord r = resolve_separable_reading(2, theta);
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    const double display = 0.5 * (1.0 + std::sqrt(0.5) * std::sqrt(s * s + 0.5 * (1.0 - c) * (1.0 - c)));
    EXPECT_NEAR(r.expected, display, 1e-9);
    EXPECT_TRUE(r.passed);
  }
}

TEST(SeparableReading, AllEvenNOnGrid) {
  for (int n : {2, 4, 6, 8}) {
    for (double theta : {0.1, 0.3, 0.5, 0.7}) EXPECT_TRUE(resolve_separable_reading(n, theta).passed) << n << " " << theta;
  }
}

// ---- null state -----------------------------------------------------------------------------------

TEST(NullStateRelation, EvenNGrid) {
  for (int n : {2, 4, 6, 8, 10}) {
    for (double theta : {0.1, 0.3, 0.5, 0.7, kPi / 4}) {
      const std::vector<VerificationRecord> records = verify_null_state_relation(n, theta);
      ASSERT_EQ(records.size(), 2u);
      EXPECT_EQ(records[0].check_name, "null_state.overlap_with_mean");
      EXPECT_EQ(records[1].check_name, "null_state.measurement_sum");
      EXPECT_TRUE(all_passed(records)) << n << " " << theta;
    }
  }
}

// ---- probe search ------------------------------------------------------------------------------------

TEST(ProbeSearch, TwoDetectorWhichDetectorReachesBound) {
  const ProbeSearchResult r = probe_search(2, kPi / 8, SearchObjective::kWhichDetectorPairwise, 20);
  EXPECT_NEAR(r.reference_value, 0.5 * (1.0 + std::sin(kPi / 4)), 1e-12);
  EXPECT_NEAR(r.best_value, r.reference_value, 1e-6);
  EXPECT_TRUE(r.record.passed);
  EXPECT_NEAR(r.best_probe.norm(), 1.0, 1e-12);
}

TEST(ProbeSearch, TwoDetectorOneOrNoneReachesBalancedOverlap) {
  const ProbeSearchResult r = probe_search(2, kPi / 8, SearchObjective::kOneOrNoneOverlap, 20);
  EXPECT_NEAR(r.best_value, std::cos(kPi / 8), 1e-4);
  EXPECT_TRUE(r.record.passed);
}

TEST(ProbeSearch, LargerNIsExploratory) {
  const ProbeSearchResult r = probe_search(4, 0.3, SearchObjective::kWhichDetectorPairwise, 5);
  EXPECT_NE(r.record.check_name.find("exploratory"), std::string::npos);
  EXPECT_TRUE(std::isinf(r.record.tolerance));
  EXPECT_EQ(r.best_probe.size(), 16);
}

TEST(ProbeSearch, DeterministicForSeed) {
  const ProbeSearchResult a = probe_search(3, 0.4, SearchObjective::kOneOrNoneOverlap, 4, 99);
  const ProbeSearchResult b = probe_search(3, 0.4, SearchObjective::kOneOrNoneOverlap, 4, 99);
  EXPECT_EQ(a.best_value, b.best_value);
  EXPECT_EQ(a.best_probe, b.best_probe);
}

TEST(ProbeSearch, Errors) {
  EXPECT_THROW(probe_search(1, 0.3, SearchObjective::kOneOrNoneOverlap, 5), std::invalid_argument);
  EXPECT_THROW(probe_search(7, 0.3, SearchObjective::kOneOrNoneOverlap, 5), std::invalid_argument);
  EXPECT_THROW(probe_search(2, 0.3, SearchObjective::kOneOrNoneOverlap, 0), std::invalid_argument);
}

// ---- suite ----------------------------------------------------------------------------------------------

TEST(VerificationSuite, QuickPresetPasses) {
  const std::vector<VerificationRecord> records = run_verification_suite(VerificationGrid::quick());
  ASSERT_FALSE(records.empty());
  for (const VerificationRecord& r : records) {
    EXPECT_TRUE(r.passed) << r.check_name << " expected " << r.expected << " observed " << r.observed;
  }
  EXPECT_TRUE(std::is_sorted(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.check_name, a.parameters) < std::tie(b.check_name, b.parameters);
  }));
}

TEST(VerificationSuite, OddNIsSkippedNotFailed) {
  const std::vector<VerificationRecord> records = run_verification_suite(VerificationGrid::quick());
  const bool any_skip = std::any_of(records.begin(), records.end(), [](const VerificationRecord& r) {
    return r.skipped && r.parameters.n && *r.parameters.n % 2 == 1;
  });
  EXPECT_TRUE(any_skip);
}

TEST(VerificationSuite, ZeroToleranceFailsSomething) {
  const std::vector<VerificationRecord> records = run_verification_suite(VerificationGrid::quick(), 0.0);
  EXPECT_FALSE(all_passed(records));
}

TEST(VerificationSuite, Deterministic) {
  const std::vector<VerificationRecord> a = run_verification_suite(VerificationGrid::quick());
  const std::vector<VerificationRecord> b = run_verification_suite(VerificationGrid::quick());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].check_name, b[i].check_name);
    EXPECT_EQ(a[i].observed, b[i].observed);
  }
}

TEST(VerificationSuite, Presets) {
  EXPECT_TRUE(VerificationGrid::preset("quick").has_value());
  EXPECT_TRUE(VerificationGrid::preset("default").has_value());
  EXPECT_TRUE(VerificationGrid::preset("deep").has_value());
  EXPECT_FALSE(VerificationGrid::preset("fast").has_value());
}

}  // namespace
}  // namespace qsnet
