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
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsnet/network.hpp"
#include "qsnet/tensor.hpp"

namespace qsnet {
namespace {

constexpr double kPi = std::numbers::pi;

// Amplitude index with the bits of sites s and s+1 exchanged (site 1 = MSB).
std::size_t swap_adjacent(std::size_t idx, int site, int n) {
  const int hi = n - site;
  const int lo = hi - 1;
  const std::size_t a = (idx >> hi) & 1u;
  const std::size_t b = (idx >> lo) & 1u;
  if (a == b) return idx;
  return idx ^ ((std::size_t{1} << hi) | (std::size_t{1} << lo));
}

// ---- PhaseChannel ------------------------------------------------------------------

TEST(PhaseChannel, RangeIsEnforced) {
  EXPECT_NO_THROW(PhaseChannel(kPi / 4));
  EXPECT_NO_THROW(PhaseChannel(-kPi / 4));
  EXPECT_THROW(PhaseChannel(0.8), std::out_of_range);
  EXPECT_THROW(PhaseChannel(-1.0), std::out_of_range);
}

TEST(PhaseChannel, EquivalentInRangeDoesNotRewrite) {
  const auto folded = PhaseChannel::equivalent_in_range(0.3 + kPi);
  ASSERT_TRUE(folded.has_value());
  EXPECT_NEAR(*folded, 0.3, 1e-12);
  EXPECT_FALSE(PhaseChannel::equivalent_in_range(1.2).has_value());
}

TEST(PhaseChannel, UnitaryIsDiagonalPhase) {
  const DenseOperator u = PhaseChannel(0.4).unitary();
  EXPECT_TRUE(u.unitary());
  EXPECT_NEAR(std::abs(u.matrix()(0, 0) - std::polar(1.0, 0.4)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.matrix()(1, 1) - std::polar(1.0, -0.4)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.matrix()(0, 1)), 0.0, 1e-15);
}

// ---- probes ------------------------------------------------------------------------

TEST(BuildProbe, EntangledPair) {
  const Ket a = build_probe(ProbeSpec::symmetric(2, 1));
  const Ket b = build_probe(ProbeSpec::two_detector_optimal());
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(a[1] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a[2] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a[0]) + std::abs(a[3]), 0.0, 1e-15);
  EXPECT_LT((a.amplitudes() - b.amplitudes()).norm(), 1e-15);
}

TEST(BuildProbe, SeparablePair) {
  const Ket s = build_probe(ProbeSpec::separable(2));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s[i] - 0.5), 0.0, 1e-15);
}

TEST(BuildProbe, SymmetricFourTwo) {
  const Ket s = build_probe(ProbeSpec::symmetric(4, 2));
  int nonzero = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    if (std::abs(s[i]) > 1e-12) {
      ++nonzero;
      EXPECT_NEAR(s[i].real(), 1.0 / std::sqrt(6.0), 1e-15);
      EXPECT_EQ(std::popcount(i), 2);  // two |u-> factors, two |u+>
    }
  }
  EXPECT_EQ(nonzero, 6);
}

TEST(BuildProbe, KCountsPlusFactors) {
  // k = N: only |u+ ... u+>, which is index 0.
  const Ket all_plus = build_probe(ProbeSpec::symmetric(3, 3));
  EXPECT_NEAR(std::abs(all_plus[0]), 1.0, 1e-15);
  const Ket all_minus = build_probe(ProbeSpec::symmetric(3, 0));
  EXPECT_NEAR(std::abs(all_minus[7]), 1.0, 1e-15);
}

TEST(BuildProbe, SymmetricStatesArePermutationInvariant) {
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k <= n; ++k) {
      const Ket s = build_probe(ProbeSpec::symmetric(n, k));
      for (int site = 1; site < n; ++site) {
        for (std::size_t i = 0; i < s.dim(); ++i) {
          EXPECT_EQ(s[i], s[swap_adjacent(i, site, n)]) << "n=" << n << " k=" << k;
        }
      }
    }
  }
}

TEST(BuildProbe, Errors) {
  EXPECT_THROW(build_probe(ProbeSpec::symmetric(4, 5)), std::invalid_argument);
  EXPECT_THROW(build_probe(ProbeSpec::symmetric(4, -1)), std::invalid_argument);
  EXPECT_THROW(build_probe(ProbeSpec::separable(1)), std::invalid_argument);
  EXPECT_THROW(build_probe(ProbeSpec::symmetric(kMaxQubits + 1, 1)), std::invalid_argument);
}

TEST(BuildProbe, CustomIsNormalized) {
  Vector c(4);
  c << 1.0, 2.0, Complex(0, 2), 4.0;
  const Ket k = build_probe(ProbeSpec::custom(c));
  EXPECT_NEAR(k.amplitudes().norm(), 1.0, 1e-12);
}

// ---- hypotheses ----------------------------------------------------------------------

TEST(HypothesisStates, ZeroPhaseGivesCopies) {
  const Ket probe = build_probe(ProbeSpec::symmetric(3, 1));
  const HypothesisEnsemble e = hypothesis_states(probe, PhaseChannel(0.0), true, 0.4);
  ASSERT_EQ(e.size(), 4u);
  for (const Ket& s : e.states) EXPECT_LT((s.amplitudes() - probe.amplitudes()).norm(), 1e-15);
  EXPECT_NEAR(e.priors[0], 0.4, 1e-15);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(e.priors[j], 0.2, 1e-15);
  EXPECT_TRUE(e.includes_null);
}

TEST(HypothesisStates, EntangledPairOutputs) {
  const double theta = 0.3;
  const HypothesisEnsemble e = hypothesis_states(build_probe(ProbeSpec::two_detector_optimal()), PhaseChannel(theta));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.states[0][1] - r * std::polar(1.0, theta)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.states[0][2] - r * std::polar(1.0, -theta)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.states[1][1] - r * std::polar(1.0, -theta)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.states[1][2] - r * std::polar(1.0, theta)), 0.0, 1e-15);
  EXPECT_NEAR(e.priors[0], 0.5, 1e-15);
}

TEST(HypothesisStates, NullPriorRange) {
  const Ket probe = build_probe(ProbeSpec::separable(2));
  EXPECT_THROW(hypothesis_states(probe, PhaseChannel(0.1), true, 1.5), std::invalid_argument);
  EXPECT_THROW(hypothesis_states(probe, PhaseChannel(0.1), true, -0.1), std::invalid_argument);
}

TEST(HypothesisEnsemble, ValidatesPriors) {
  const std::vector<Ket> states = {Ket::basis(2, 0), Ket::basis(2, 1)};
  EXPECT_THROW(HypothesisEnsemble(states, {0.5}), std::invalid_argument);
  EXPECT_THROW(HypothesisEnsemble(states, {0.7, 0.7}), std::invalid_argument);
  EXPECT_THROW(HypothesisEnsemble(states, {1.5, -0.5}), std::invalid_argument);
  EXPECT_NO_THROW(HypothesisEnsemble(states, {0.25, 0.75}));
}

// ---- overlaps ------------------------------------------------------------------------

TEST(SymmetricOverlap, Examples) {
  EXPECT_NEAR(symmetric_overlap_closed(5, 0, 0.6), 1.0, 1e-15);
  EXPECT_NEAR(symmetric_overlap_closed(4, 2, kPi / 8), 0.8047378541243652, 1e-14);
  EXPECT_NEAR(symmetric_overlap_closed(2, 1, kPi / 4), 0.0, 1e-15);
}

TEST(SymmetricOverlap, MatchesFullSpaceGram) {
  for (int n = 2; n <= 10; ++n) {
    for (double theta : {0.2, 0.55}) {
      const int k = n / 2;
      const HypothesisEnsemble e = hypothesis_states(build_probe(ProbeSpec::symmetric(n, k)), PhaseChannel(theta));
      const double closed = symmetric_overlap_closed(n, k, theta);
      for (std::size_t a = 0; a < e.size(); ++a) {
        EXPECT_NEAR(e.states[a].amplitudes().norm(), 1.0, 1e-12);
        for (std::size_t b = a + 1; b < e.size(); ++b) {
          EXPECT_NEAR(std::abs(e.states[a].inner(e.states[b]) - closed), 0.0, 1e-10) << "n=" << n;
        }
      }
    }
  }
}

TEST(SymmetricOverlap, MinimizedAtBalancedK) {
  for (int n = 2; n <= 12; ++n) {
    const double theta = 0.45;
    int best = 0;
    for (int k = 1; k <= n; ++k) {
      if (symmetric_overlap_closed(n, k, theta) < symmetric_overlap_closed(n, best, theta) - 1e-15) best = k;
    }
    EXPECT_TRUE(best == n / 2 || best == (n + 1) / 2) << "n=" << n << " best k=" << best;
    EXPECT_NEAR(symmetric_overlap_closed(n, n / 2, theta), symmetric_overlap_closed(n, (n + 1) / 2, theta), 1e-15);
  }
}

TEST(SeparableOverlap, MatchesFullSpace) {
  const double theta = 0.35;
  const HypothesisEnsemble e = hypothesis_states(build_probe(ProbeSpec::separable(4)), PhaseChannel(theta));
  EXPECT_NEAR(std::abs(e.states[0].inner(e.states[3]) - separable_overlap_closed(theta)), 0.0, 1e-12);
}

// ---- two-detector optimizer ------------------------------------------------------------

bool inside_triangle(Complex z, double theta) {
  // Barycentric coordinates against e^{2i theta}, 1, e^{-2i theta}.
  const double s = std::sin(2.0 * theta);
  const double c = std::cos(2.0 * theta);
  if (std::abs(s) < 1e-15) return std::abs(z - 1.0) < 1e-12;
  const double w_plus = (z.imag() / s + (1.0 - z.real()) / (1.0 - c)) / 2.0;
  const double w_minus = w_plus - z.imag() / s;
  const double w_mid = 1.0 - w_plus - w_minus;
  return w_plus >= -1e-9 && w_minus >= -1e-9 && w_mid >= -1e-9;
}

TEST(TriangleCoefficients, OverlapFormula) {
  const double theta = 0.25;
  const TriangleCoefficients t(Complex(1, 0), Complex(0, 2), Complex(1, 1), Complex(0, 0), theta);
  const double total = 1.0 + 4.0 + 2.0;
  const Complex z = 4.0 / total * std::polar(1.0, 2.0 * theta) + 1.0 / total + 2.0 / total * std::polar(1.0, -2.0 * theta);
  EXPECT_NEAR(std::abs(t.z() - z), 0.0, 1e-15);
  EXPECT_NEAR(t.as_vector().norm(), 1.0, 1e-15);
  EXPECT_TRUE(inside_triangle(t.z(), theta));
}

TEST(MinimizeTwoDetectorOverlap, MaximalPhaseReachesOrigin) {
  const TriangleCoefficients best = minimize_two_detector_overlap(PhaseChannel(kPi / 4), 16, 7);
  EXPECT_NEAR(std::abs(best.z()), 0.0, 1e-8);
}

TEST(MinimizeTwoDetectorOverlap, ReproducesEntangledOptimum) {
  for (double theta : {0.05, 0.2, kPi / 8, 0.5, 0.7, kPi / 4}) {
    const TriangleCoefficients best = minimize_two_detector_overlap(PhaseChannel(theta), 32, 20240601);
    const double target = std::abs(std::cos(2.0 * theta));
    EXPECT_NEAR(std::abs(best.z()), target, 1e-8) << theta;
    EXPECT_LE(std::abs(best.c_pp()), 1e-5);
    EXPECT_LE(std::abs(best.c_mm()), 1e-5);
    EXPECT_LE(std::abs(std::abs(best.c_pm()) - std::abs(best.c_mp())), 1e-5);
    EXPECT_TRUE(inside_triangle(best.z(), theta));
  }
  const TriangleCoefficients mid = minimize_two_detector_overlap(PhaseChannel(kPi / 8), 32, 1);
  EXPECT_NEAR(std::abs(mid.z()), 0.7071068, 1e-7);
}

TEST(MinimizeTwoDetectorOverlap, NegativePhaseMirrors) {
  const TriangleCoefficients best = minimize_two_detector_overlap(PhaseChannel(-0.3), 32, 3);
  EXPECT_NEAR(std::abs(best.z()), std::abs(std::cos(0.6)), 1e-8);
}

TEST(MinimizeTwoDetectorOverlap, SeededRunsAreIdentical) {
  const TriangleCoefficients a = minimize_two_detector_overlap(PhaseChannel(0.33), 10, 99);
  const TriangleCoefficients b = minimize_two_detector_overlap(PhaseChannel(0.33), 10, 99);
  EXPECT_EQ(a.as_vector(), b.as_vector());
}

TEST(MinimizeTwoDetectorOverlap, Errors) {
  EXPECT_THROW(minimize_two_detector_overlap(PhaseChannel(0.0), 4, 1), std::invalid_argument);
  EXPECT_THROW(minimize_two_detector_overlap(PhaseChannel(0.2), 0, 1), std::invalid_argument);
}

// ---- one-or-none overlaps --------------------------------------------------------------

TEST(OneOrNoneOverlaps, UniformAndEigenvectorCases) {
  const double theta = kPi / 4;
  const TriangleCoefficients uniform(0.5, 0.5, 0.5, 0.5, theta);
  const auto [a, b] = one_or_none_overlaps(uniform, theta);
  EXPECT_NEAR(std::abs(a - std::cos(theta)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b - std::cos(theta)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a), 0.7071068, 1e-7);

  const TriangleCoefficients plus(1.0, 0.0, 0.0, 0.0, 0.3);
  const auto [c, d] = one_or_none_overlaps(plus, 0.3);
  EXPECT_NEAR(std::abs(c - std::polar(1.0, 0.3)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d - std::polar(1.0, 0.3)), 0.0, 1e-15);
}

TEST(OneOrNoneOverlaps, SimplexGridMinimumIsUniform) {
  const double theta = kPi / 8;
  const int steps = 50;  // |c|^2 resolution 0.02
  double best = 2.0;
  std::array<int, 4> arg{};
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      for (int c = 0; a + b + c <= steps; ++c) {
        const int d = steps - a - b - c;
        const TriangleCoefficients t(std::sqrt(a / double(steps)), std::sqrt(b / double(steps)),
                                     std::sqrt(c / double(steps)), std::sqrt(d / double(steps)), theta);
        const auto [x, y] = one_or_none_overlaps(t, theta);
        const double worst = std::max(std::abs(x), std::abs(y));
        if (worst < best - 1e-15) {
          best = worst;
          arg = {a, b, c, d};
        }
      }
    }
  }
  EXPECT_NEAR(best, std::cos(theta), 1e-12);
  // The minimizer has balanced marginals on both sites.
  EXPECT_EQ(arg[0] + arg[1], steps / 2);
  EXPECT_EQ(arg[0] + arg[2], steps / 2);
}

}  // namespace
}  // namespace qsnet
