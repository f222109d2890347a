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

#include "qsnet/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsnet {

namespace {

constexpr std::size_t kPlusMinus = 1;  // |u+ u->
constexpr std::size_t kMinusPlus = 2;  // |u- u+>

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1] (got " +
                                std::to_string(p) + ")");
  }
}

void require_even_detectors(int n, const char* what) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument(std::string(what) + ": N must be even and >= 2 (got " +
                                std::to_string(n) + ")");
  }
}

void require_nonzero_theta(double theta, const char* what) {
  if (theta == 0.0) {
    throw std::invalid_argument(std::string(what) +
                                ": theta = 0 makes all hypotheses identical");
  }
}

void finalize(DiscriminationReport& r) { r.abs_diff = std::abs(r.closed_form_success - r.numeric_success); }

void apply_probabilities(DiscriminationReport& r, const Probabilities& p) {
  r.numeric_success = p.success;
  r.failure_prob = p.failure;
  r.error_prob = p.error;
}

std::vector<double> uniform_priors(int n) { return std::vector<double>(static_cast<std::size_t>(n), 1.0 / n); }

OutcomeMap identity_map(std::size_t hypotheses, bool with_complement, bool complement_is_failure) {
  OutcomeMap map;
  map.reserve(hypotheses + 1);
  for (std::size_t j = 0; j < hypotheses; ++j) map.push_back(Outcome::hypothesis_of(j));
  if (with_complement) map.push_back(complement_is_failure ? Outcome::failure() : Outcome::unassigned());
  return map;
}

Vector two_qubit(Complex plus_minus, Complex minus_plus) {
  Vector v = Vector::Zero(4);
  v(kPlusMinus) = plus_minus;
  v(kMinusPlus) = minus_plus;
  return v;
}

Vector mean_vector(const HypothesisEnsemble& e, std::size_t first) {
  Vector h = Vector::Zero(static_cast<Eigen::Index>(e.dim()));
  for (std::size_t j = first; j < e.size(); ++j) h += e.states[j].amplitudes();
  return h / static_cast<double>(e.size() - first);
}

// Off-diagonal overlap <E_j|E_k> for the family's probe.
double family_overlap(int n, double theta, ProbeFamily family) {
  return family == ProbeFamily::kEntangled ? symmetric_overlap_closed(n, n / 2, theta)
                                           : separable_overlap_closed(theta);
}

// Hypothesis states for the symmetric families. Full register for
// N <= kFullSpaceMaxN; coordinates in an orthonormal basis of the span
// (columns of G^{1/2}, G from the closed-form overlaps) up to
// kGramDenseMaxN; nullopt beyond.
std::optional<HypothesisEnsemble> family_ensemble(int n, double theta, ProbeFamily family,
                                                  bool include_null, double p, bool* full_space) {
  const PhaseChannel channel(theta);
  if (n <= kFullSpaceMaxN) {
    *full_space = true;
    const Ket probe = build_probe(family == ProbeFamily::kEntangled ? ProbeSpec::symmetric_balanced(n)
                                                                    : ProbeSpec::separable(n));
    return hypothesis_states(probe, channel, include_null, p);
  }
  if (n > kGramDenseMaxN) return std::nullopt;
  *full_space = false;
  const int offset = include_null ? 1 : 0;
  const int m = n + offset;
  const double overlap = family_overlap(n, theta, family);
  Matrix g = Matrix::Constant(m, m, Complex(overlap, 0.0));
  if (include_null) {
    // <probe|F_j|probe> = cos(theta) for both families.
    g.row(0).setConstant(std::cos(theta));
    g.col(0).setConstant(std::cos(theta));
  }
  g.diagonal().setOnes();
  const DenseOperator root = sqrt_positive(DenseOperator(std::move(g), OperatorFlag::kHermitian));
  std::vector<Ket> states;
  states.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) states.emplace_back(root.matrix().col(j));
  std::vector<double> priors;
  if (include_null) {
    priors.assign(static_cast<std::size_t>(m), (1.0 - p) / n);
    priors[0] = p;
  } else {
    priors = uniform_priors(n);
  }
  return HypothesisEnsemble(std::move(states), std::move(priors), include_null);
}

ReportParameters symmetric_parameters(int n, double theta, ProbeFamily family) {
  ReportParameters params;
  params.n = n;
  if (family == ProbeFamily::kEntangled) params.k = n / 2;
  params.theta = theta;
  params.priors = uniform_priors(n);
  params.probe = to_string(family);
  return params;
}

}  // namespace

std::string to_string(ProbeFamily family) {
  return family == ProbeFamily::kEntangled ? "entangled" : "separable";
}

Probabilities evaluate_povm(const HypothesisEnsemble& ensemble, const Povm& povm,
                            const OutcomeMap& outcome_map,
                            const std::vector<std::size_t>& hypothesis_class) {
  if (outcome_map.size() != povm.size()) {
    throw std::invalid_argument("evaluate_povm: outcome map length != POVM size");
  }
  if (!hypothesis_class.empty() && hypothesis_class.size() != ensemble.size()) {
    throw std::invalid_argument("evaluate_povm: hypothesis class length != ensemble size");
  }
  if (povm.dim() != ensemble.dim()) {
    throw std::invalid_argument("evaluate_povm: POVM and ensemble dimensions differ");
  }
  Probabilities out;
  for (std::size_t j = 0; j < ensemble.size(); ++j) {
    const double prior = ensemble.priors[j];
    if (prior == 0.0) continue;
    const std::size_t cls = hypothesis_class.empty() ? j : hypothesis_class[j];
    const Vector& psi = ensemble.states[j].amplitudes();
    for (std::size_t i = 0; i < povm.size(); ++i) {
      const double weight = prior * povm[i].expectation(psi);
      const Outcome& o = outcome_map[i];
      if (o.kind == Outcome::Kind::kFailure) {
        out.failure += weight;
      } else if (o.kind == Outcome::Kind::kHypothesis && o.hypothesis == cls) {
        out.success += weight;
      } else {
        out.error += weight;
      }
    }
  }
  return out;
}

// ---- two detectors ------------------------------------------------------------

StrategyResult min_error_two_detector(double theta) {
  const PhaseChannel channel(theta);
  const HypothesisEnsemble ensemble =
      hypothesis_states(build_probe(ProbeSpec::two_detector_optimal()), channel);

  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Vector v1 = two_qubit(r, -i * r);
  Vector v2 = two_qubit(r, i * r);
  // For theta < 0 the labels swap so that Pi_1 still detects phi_1 optimally.
  if (theta < 0.0) std::swap(v1, v2);

  Matrix complement = Matrix::Zero(4, 2);
  complement(0, 0) = 1.0;  // |u+ u+>
  complement(3, 1) = 1.0;  // |u- u->
  Povm povm({PovmElement::rank_one(v1), PovmElement::rank_one(v2), PovmElement::factored(complement)});

  StrategyResult out{.report = {}, .povm = std::move(povm), .ensemble = ensemble,
                     .outcome_map = identity_map(2, true, false), .hypothesis_class = {}};
  DiscriminationReport& rep = out.report;
  rep.strategy = "min_error_two_detector";
  rep.parameters = {.n = 2, .k = 1, .theta = theta, .priors = {0.5, 0.5}, .p = std::nullopt,
                    .probe = "entangled"};
  rep.closed_form_success = 0.5 * (1.0 + std::abs(std::sin(2.0 * theta)));
  apply_probabilities(rep, evaluate_povm(ensemble, *out.povm, out.outcome_map));
  rep.notes.push_back("measurement projectors do not depend on theta");
  rep.degenerate = theta == 0.0;
  finalize(rep);
  return out;
}

StrategyResult unambiguous_two_detector(double theta) {
  const PhaseChannel channel(theta);
  require_nonzero_theta(theta, "unambiguous_two_detector");
  const HypothesisEnsemble ensemble =
      hypothesis_states(build_probe(ProbeSpec::two_detector_optimal()), channel);

  const double r = 1.0 / std::sqrt(2.0);
  const Complex up = std::polar(1.0, theta);
  const Complex down = std::polar(1.0, -theta);
  const Vector perp1 = two_qubit(up * r, -down * r);  // orthogonal to phi_1
  const Vector perp2 = two_qubit(down * r, -up * r);  // orthogonal to phi_2
  const double d = 1.0 / (1.0 + std::cos(2.0 * theta));

  Povm povm = complete_with_residual({PovmElement::rank_one(perp2, d), PovmElement::rank_one(perp1, d)},
                                     /*complement_is_failure=*/true);

  StrategyResult out{.report = {}, .povm = std::move(povm), .ensemble = ensemble,
                     .outcome_map = identity_map(2, true, true), .hypothesis_class = {}};
  DiscriminationReport& rep = out.report;
  rep.strategy = "unambiguous_two_detector";
  rep.parameters = {.n = 2, .k = 1, .theta = theta, .priors = {0.5, 0.5}, .p = std::nullopt,
                    .probe = "entangled"};
  rep.closed_form_success = 1.0 - std::abs(std::cos(2.0 * theta));
  apply_probabilities(rep, evaluate_povm(ensemble, *out.povm, out.outcome_map));
  finalize(rep);
  return out;
}

// ---- one or none ---------------------------------------------------------------

double one_or_none_trace_norm_closed(double p0, double theta) {
  require_probability(p0, "p0");
  const double p1 = 1.0 - p0;
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const double radicand =
      p1 * p1 * (1.0 + c2) * (1.0 + c2) + 4.0 * p0 * p0 + 4.0 * p0 * p1 * (1.0 - 3.0 * c2);
  return 0.5 * std::sqrt(std::max(radicand, 0.0)) + 0.5 * p1 * s2;
}

double one_or_none_success_closed(double p0, double theta) {
  return 0.5 * (1.0 + one_or_none_trace_norm_closed(p0, theta));
}

DenseOperator one_or_none_lambda(double p0, double theta) {
  require_probability(p0, "p0");
  const PhaseChannel channel(theta);
  const Ket probe = build_probe(ProbeSpec::separable(2));
  const Ket first = channel.apply(probe, 1, 2);
  const Ket second = channel.apply(probe, 2, 2);
  const double p1 = 1.0 - p0;
  Matrix lambda = p0 * probe.amplitudes() * probe.amplitudes().adjoint() -
                  0.5 * p1 * first.amplitudes() * first.amplitudes().adjoint() -
                  0.5 * p1 * second.amplitudes() * second.amplitudes().adjoint();
  lambda = (0.5 * (lambda + lambda.adjoint())).eval();
  return DenseOperator(std::move(lambda), OperatorFlag::kHermitian);
}

StrategyResult one_or_none(double p0, double theta) {
  require_probability(p0, "p0");
  const PhaseChannel channel(theta);
  const Ket probe = build_probe(ProbeSpec::separable(2));
  const double p1 = 1.0 - p0;
  HypothesisEnsemble ensemble({probe, channel.apply(probe, 1, 2), channel.apply(probe, 2, 2)},
                              {p0, 0.5 * p1, 0.5 * p1});

  const DenseOperator lambda = one_or_none_lambda(p0, theta);
  const EigenDecomposition eig = hermitian_eig(lambda);
  // Decide "none" on the positive eigenspace of Lambda.
  Eigen::Index positive = 0;
  for (double v : eig.eigenvalues) {
    if (v > 0.0) ++positive;
  }
  Matrix factor = eig.eigenvectors.leftCols(positive);
  Povm povm = complete_with_residual({PovmElement::factored(std::move(factor))}, false);

  StrategyResult out{.report = {}, .povm = std::move(povm), .ensemble = std::move(ensemble),
                     .outcome_map = {Outcome::hypothesis_of(0), Outcome::hypothesis_of(1)},
                     .hypothesis_class = {0, 1, 1}};
  DiscriminationReport& rep = out.report;
  rep.strategy = "one_or_none";
  rep.parameters = {.n = 2, .k = std::nullopt, .theta = theta, .priors = {p0, p1}, .p = p0,
                    .probe = "separable"};
  rep.closed_form_success = one_or_none_success_closed(p0, theta);
  rep.degenerate = theta == 0.0;
  const double norm = trace_norm(lambda);
  const Probabilities probs = evaluate_povm(*out.ensemble, *out.povm, out.outcome_map, out.hypothesis_class);
  rep.numeric_success = 0.5 * (1.0 + norm);
  rep.failure_prob = 0.0;
  rep.error_prob = 1.0 - rep.numeric_success;
  if (std::abs(probs.success - rep.numeric_success) > 1e-9) {
    rep.notes.push_back("POVM evaluation " + std::to_string(probs.success) +
                        " disagrees with the trace-norm value");
  }
  finalize(rep);
  return out;
}

double small_theta_sensitivity(double p0) {
  require_probability(p0, "p0");
  constexpr double h = 1e-5;
  const auto derivative = [&](double theta) {
    return (one_or_none_success_closed(p0, theta + h) - one_or_none_success_closed(p0, theta - h)) /
           (2.0 * h);
  };
  return 2.0 * derivative(1e-3) - derivative(2e-3);
}

// ---- N detectors: scalars and closed forms -----------------------------------------

PgmScalars pgm_symmetric_scalars(int n, double theta, ProbeFamily family, double p) {
  if (n < 2) throw std::invalid_argument("pgm_symmetric_scalars: N must be >= 2");
  const PhaseChannel channel(theta);
  require_probability(p, "p");
  const double c = std::cos(2.0 * theta);
  PgmScalars s;
  if (family == ProbeFamily::kSeparable) {
    s.r0 = 1.0 / n + (n - 1.0) / (2.0 * n) * (1.0 + c);
    s.r1 = (1.0 - c) / (2.0 * n);
  } else if (n % 2 == 0) {
    s.r0 = 0.5 * (1.0 + c);
    s.r1 = (1.0 - c) / (2.0 * (n - 1.0));
  } else {
    // Odd N: equal-overlap structure from the explicit states' Gram matrix.
    double g = 0.0;
    if (n <= kFullSpaceMaxN) {
      const HypothesisEnsemble e = hypothesis_states(build_probe(ProbeSpec::symmetric_balanced(n)), channel);
      g = e.states[0].inner(e.states[1]).real();
    } else {
      g = symmetric_overlap_closed(n, n / 2, theta);
    }
    s.r0 = (1.0 + (n - 1.0) * g) / n;
    s.r1 = s.r0 - g;
  }
  s.t = s.r0 > 0.0 ? std::sqrt(s.r1 / s.r0) : 0.0;
  s.d0 = 1.0 / std::sqrt(p + (1.0 - p) * s.r0);
  const double denom = (1.0 - p) * s.r1;
  s.d1 = denom > 0.0 ? 1.0 / std::sqrt(denom) : std::numeric_limits<double>::infinity();
  return s;
}

double pgm_symmetric_closed(int n, double theta) {
  require_even_detectors(n, "pgm_symmetric_closed");
  const PgmScalars s = pgm_symmetric_scalars(n, theta, ProbeFamily::kEntangled);
  const double a = std::sqrt(s.r0) + (n - 1.0) * std::sqrt(s.r1);
  return a * a / n;
}

double pgm_separable_first_line(int n, double theta) {
  const double c = std::cos(2.0 * theta);
  return (1.0 + (n - 1.0) * (n - 2.0) / (2.0 * n) * (1.0 - c)) / n;
}

double pgm_separable_second_line(int n, double theta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  return (n - 1.0) / std::sqrt(static_cast<double>(n)) *
         std::sqrt(s * s + (1.0 - c) * (1.0 - c) / n) / n;
}

double pgm_separable_closed(int n, double theta) {
  if (n < 2) throw std::invalid_argument("pgm_separable_closed: N must be >= 2");
  return pgm_separable_first_line(n, theta) + pgm_separable_second_line(n, theta);
}

double unambiguous_symmetric_failure_closed(int n, double theta) {
  require_even_detectors(n, "unambiguous_symmetric_failure_closed");
  return 1.0 - n * (1.0 - std::cos(2.0 * theta)) / (2.0 * (n - 1.0));
}

double pgm_with_null_closed(int n, double theta, double p) {
  require_even_detectors(n, "pgm_with_null_closed");
  require_probability(p, "p");
  if (p == 1.0) return 1.0;
  const PgmScalars s = pgm_symmetric_scalars(n, theta, ProbeFamily::kEntangled, p);
  const double tail = s.r0 * s.d0 + (1.0 - s.r0) * s.d1;
  return p * p * s.d0 * s.d0 + (1.0 - p) * (1.0 - p) / n * tail * tail;
}

// ---- N detectors: strategies -------------------------------------------------------

StrategyResult pgm_symmetric(int n, double theta, ProbeFamily family) {
  if (n < 2) throw std::invalid_argument("pgm_symmetric: N must be >= 2");
  const PhaseChannel channel(theta);
  StrategyResult out;
  DiscriminationReport& rep = out.report;
  rep.strategy = family == ProbeFamily::kEntangled ? "pgm_entangled" : "pgm_separable";
  rep.parameters = symmetric_parameters(n, theta, family);
  rep.closed_form_available = family == ProbeFamily::kSeparable || n % 2 == 0;

  if (theta == 0.0) {
    rep.degenerate = true;
    rep.closed_form_success = rep.numeric_success = 1.0 / n;
    rep.error_prob = 1.0 - rep.numeric_success;
    rep.notes.push_back("theta = 0: hypotheses identical, best-prior guess");
    finalize(rep);
    return out;
  }

  bool full_space = false;
  std::optional<HypothesisEnsemble> ensemble = family_ensemble(n, theta, family, false, 0.0, &full_space);
  if (!ensemble) {
    const double overlap = family_overlap(n, theta, family);
    rep.numeric_success = pgm_circulant_success(equicorrelated_gram(n, overlap));
    rep.error_prob = 1.0 - rep.numeric_success;
    rep.closed_form_success = !rep.closed_form_available ? rep.numeric_success
                              : family == ProbeFamily::kEntangled ? pgm_symmetric_closed(n, theta)
                                                                  : pgm_separable_closed(n, theta);
    rep.notes.push_back("numeric value from DFT diagonalization of the circulant Gram matrix");
    finalize(rep);
    return out;
  }
  if (!full_space) rep.notes.push_back("states represented in span coordinates");

  if (!rep.closed_form_available) {
    StrategyResult numeric = pgm_numeric(*ensemble);
    numeric.report.strategy = rep.strategy;
    numeric.report.parameters = rep.parameters;
    numeric.report.closed_form_available = false;
    numeric.report.closed_form_success = numeric.report.numeric_success;
    numeric.report.notes.push_back("odd N: no closed form, numeric PGM only");
    finalize(numeric.report);
    return numeric;
  }

  // |e_j> = (|E_j> - |H>)/sqrt(N r1) + |H>/sqrt(N r0)
  const PgmScalars s = pgm_symmetric_scalars(n, theta, family);
  const Vector h = mean_vector(*ensemble, 0);
  std::vector<PovmElement> elements;
  elements.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const Vector& ej = ensemble->states[static_cast<std::size_t>(j)].amplitudes();
    elements.push_back(PovmElement::rank_one((ej - h) / std::sqrt(n * s.r1) + h / std::sqrt(n * s.r0)));
  }
  out.povm = complete_with_residual(std::move(elements), false);
  out.outcome_map = identity_map(static_cast<std::size_t>(n), true, false);
  out.ensemble = std::move(ensemble);
  rep.closed_form_success =
      family == ProbeFamily::kEntangled ? pgm_symmetric_closed(n, theta) : pgm_separable_closed(n, theta);
  apply_probabilities(rep, evaluate_povm(*out.ensemble, *out.povm, out.outcome_map));
  finalize(rep);
  return out;
}

StrategyResult unambiguous_symmetric(int n, double theta) {
  require_even_detectors(n, "unambiguous_symmetric");
  const PhaseChannel channel(theta);
  require_nonzero_theta(theta, "unambiguous_symmetric");
  const PgmScalars s = pgm_symmetric_scalars(n, theta, ProbeFamily::kEntangled);
  constexpr double eps = 1e-12;
  const double inv_n = 1.0 / n;
  if (s.r0 > 1.0 + eps) {
    throw std::domain_error("unambiguous_symmetric: condition 1 >= r0 violated (r0 = " +
                            std::to_string(s.r0) + ")");
  }
  if (s.r0 < inv_n - eps) {
    throw std::domain_error("unambiguous_symmetric: condition r0 > 1/N violated (r0 = " +
                            std::to_string(s.r0) + ", 1/N = " + std::to_string(inv_n) + ")");
  }
  if (s.r1 > inv_n + eps) {
    throw std::domain_error("unambiguous_symmetric: condition 1/N > r1 violated (r1 = " +
                            std::to_string(s.r1) + ", 1/N = " + std::to_string(inv_n) + ")");
  }

  StrategyResult out;
  DiscriminationReport& rep = out.report;
  rep.strategy = "unambiguous_symmetric";
  rep.parameters = symmetric_parameters(n, theta, ProbeFamily::kEntangled);
  const double failure_closed = unambiguous_symmetric_failure_closed(n, theta);
  rep.closed_form_success = 1.0 - failure_closed;
  if (std::abs(s.r0 - inv_n) <= eps) rep.notes.push_back("r0 = 1/N: orthogonal limit");

  bool full_space = false;
  std::optional<HypothesisEnsemble> ensemble =
      family_ensemble(n, theta, ProbeFamily::kEntangled, false, 0.0, &full_space);
  if (!ensemble) {
    // Equal-failure unambiguous success of an equiprobable circulant
    // ensemble is its smallest Gram eigenvalue.
    const DenseOperator g = equicorrelated_gram(n, family_overlap(n, theta, ProbeFamily::kEntangled));
    std::vector<Complex> row(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = g.matrix()(0, j);
    const std::vector<double> lambda = circulant_eigenvalues(row);
    rep.numeric_success = *std::min_element(lambda.begin(), lambda.end());
    rep.failure_prob = 1.0 - rep.numeric_success;
    rep.error_prob = 0.0;
    rep.notes.push_back("numeric value from the smallest circulant Gram eigenvalue");
    finalize(rep);
    return out;
  }
  if (!full_space) rep.notes.push_back("states represented in span coordinates");

  // |e_j> + (t - 1)/sqrt(N r0) |H>
  const Vector h = mean_vector(*ensemble, 0);
  std::vector<PovmElement> elements;
  elements.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const Vector& ej = ensemble->states[static_cast<std::size_t>(j)].amplitudes();
    const Vector e = (ej - h) / std::sqrt(n * s.r1) + h / std::sqrt(n * s.r0);
    elements.push_back(PovmElement::rank_one(e + (s.t - 1.0) / std::sqrt(n * s.r0) * h));
  }
  out.povm = complete_with_residual(std::move(elements), true);
  out.outcome_map = identity_map(static_cast<std::size_t>(n), true, true);
  out.ensemble = std::move(ensemble);
  apply_probabilities(rep, evaluate_povm(*out.ensemble, *out.povm, out.outcome_map));
  finalize(rep);
  return out;
}

StrategyResult pgm_with_null(int n, double theta, double p) {
  require_even_detectors(n, "pgm_with_null");
  const PhaseChannel channel(theta);
  require_probability(p, "p");

  StrategyResult out;
  DiscriminationReport& rep = out.report;
  rep.strategy = "pgm_with_null";
  rep.parameters = {.n = n, .k = n / 2, .theta = theta, .priors = {}, .p = p, .probe = "entangled"};
  rep.parameters.priors.assign(static_cast<std::size_t>(n) + 1, (1.0 - p) / n);
  rep.parameters.priors[0] = p;

  if (theta == 0.0) {
    rep.degenerate = true;
    rep.closed_form_success = rep.numeric_success = guessing_baseline(n, p);
    rep.error_prob = 1.0 - rep.numeric_success;
    rep.notes.push_back("theta = 0: hypotheses identical, best-prior guess");
    finalize(rep);
    return out;
  }
  if (p == 1.0) {
    rep.closed_form_success = rep.numeric_success = 1.0;
    rep.notes.push_back("p = 1: single effective hypothesis");
    finalize(rep);
    return out;
  }

  rep.closed_form_success = pgm_with_null_closed(n, theta, p);
  bool full_space = false;
  std::optional<HypothesisEnsemble> ensemble =
      family_ensemble(n, theta, ProbeFamily::kEntangled, true, p, &full_space);
  if (!ensemble) {
    rep.numeric_available = false;
    rep.numeric_success = rep.closed_form_success;
    rep.error_prob = 1.0 - rep.numeric_success;
    rep.notes.push_back("N above the Gram-space limit: closed form only");
    finalize(rep);
    return out;
  }
  StrategyResult numeric = pgm_numeric(*ensemble, full_space ? PgmRoute::kFullSpace : PgmRoute::kGramSpace);
  out.povm = std::move(numeric.povm);
  out.outcome_map = std::move(numeric.outcome_map);
  out.ensemble = std::move(ensemble);
  rep.numeric_success = numeric.report.numeric_success;
  rep.failure_prob = numeric.report.failure_prob;
  rep.error_prob = numeric.report.error_prob;
  if (!full_space) rep.notes.push_back("states represented in span coordinates");
  finalize(rep);
  return out;
}

// ---- generic PGM ----------------------------------------------------------------

StrategyResult pgm_numeric(const HypothesisEnsemble& ensemble, PgmRoute route) {
  const std::size_t m = ensemble.size();
  if (route == PgmRoute::kAuto) route = PgmRoute::kFullSpace;

  StrategyResult out;
  DiscriminationReport& rep = out.report;
  rep.strategy = "pgm_numeric";
  rep.closed_form_available = false;
  rep.parameters.priors = ensemble.priors;
  rep.parameters.probe = route == PgmRoute::kFullSpace ? "full_space" : "gram_space";

  // Working vectors: the register itself, or coordinates in span(states).
  std::vector<Vector> states;
  states.reserve(m);
  if (route == PgmRoute::kFullSpace) {
    for (const Ket& k : ensemble.states) states.push_back(k.amplitudes());
  } else {
    const DenseOperator root = sqrt_positive(gram(ensemble.states));
    for (std::size_t j = 0; j < m; ++j) states.push_back(root.matrix().col(static_cast<Eigen::Index>(j)));
  }
  const Eigen::Index work_dim = states.front().size();

  std::vector<Vector> measurement(m);
  if (static_cast<std::size_t>(work_dim) <= kDenseRhoMaxDim) {
    Matrix rho = Matrix::Zero(work_dim, work_dim);
    for (std::size_t j = 0; j < m; ++j) rho.noalias() += ensemble.priors[j] * states[j] * states[j].adjoint();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    const DenseOperator root_inv = inv_sqrt_on_support(DenseOperator(std::move(rho), OperatorFlag::kPositive));
    for (std::size_t j = 0; j < m; ++j) {
      measurement[j] = std::sqrt(ensemble.priors[j]) * (root_inv.matrix() * states[j]);
    }
  } else {
    // rho is supported on span(states): diagonalize it in an orthonormal
    // basis of that span.
    Matrix stacked(work_dim, static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) stacked.col(static_cast<Eigen::Index>(j)) = states[j];
    Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    const Matrix basis = qr.householderQ() * Matrix::Identity(work_dim, rank);
    const Matrix coords = basis.adjoint() * stacked;
    Matrix rho = Matrix::Zero(rank, rank);
    for (std::size_t j = 0; j < m; ++j) {
      const auto col = coords.col(static_cast<Eigen::Index>(j));
      rho.noalias() += ensemble.priors[j] * col * col.adjoint();
    }
    rho = (0.5 * (rho + rho.adjoint())).eval();
    const DenseOperator root_inv = inv_sqrt_on_support(DenseOperator(std::move(rho), OperatorFlag::kPositive));
    for (std::size_t j = 0; j < m; ++j) {
      measurement[j] = std::sqrt(ensemble.priors[j]) *
                       (basis * (root_inv.matrix() * coords.col(static_cast<Eigen::Index>(j))));
    }
    rep.notes.push_back("rho compressed onto a rank-" + std::to_string(rank) + " basis of the span");
  }

  std::vector<PovmElement> elements;
  elements.reserve(m);
  for (std::size_t j = 0; j < m; ++j) elements.push_back(PovmElement::rank_one(measurement[j]));
  out.povm = complete_with_residual(std::move(elements), false);
  out.outcome_map = identity_map(m, true, false);

  if (route == PgmRoute::kFullSpace) {
    out.ensemble = ensemble;
  } else {
    std::vector<Ket> coords;
    coords.reserve(m);
    for (const Vector& v : states) coords.emplace_back(v);
    out.ensemble = HypothesisEnsemble(std::move(coords), ensemble.priors, ensemble.includes_null);
  }
  apply_probabilities(rep, evaluate_povm(*out.ensemble, *out.povm, out.outcome_map));
  rep.closed_form_success = rep.numeric_success;
  finalize(rep);
  return out;
}

double pgm_gram_success(const DenseOperator& gram_matrix, const std::vector<double>& priors) {
  const auto m = static_cast<Eigen::Index>(gram_matrix.dim());
  if (static_cast<Eigen::Index>(priors.size()) != m) {
    throw std::invalid_argument("pgm_gram_success: priors length != Gram dimension");
  }
  Eigen::VectorXd w(m);
  for (Eigen::Index j = 0; j < m; ++j) w(j) = std::sqrt(priors[static_cast<std::size_t>(j)]);
  Matrix weighted = w.asDiagonal() * gram_matrix.matrix() * w.asDiagonal();
  weighted = (0.5 * (weighted + weighted.adjoint())).eval();
  const DenseOperator root = sqrt_positive(DenseOperator(std::move(weighted), OperatorFlag::kHermitian));
  double success = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) success += std::norm(root.matrix()(j, j));
  return success;
}

bool is_circulant(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(m(i, j) - m(0, (j - i + n) % n)) > tol) return false;
    }
  }
  return true;
}

std::vector<double> circulant_eigenvalues(const std::vector<Complex>& first_row) {
  const std::size_t n = first_row.size();
  if (n == 0) throw std::invalid_argument("circulant_eigenvalues: empty row");
  std::vector<Complex> twiddle(n);
  for (std::size_t r = 0; r < n; ++r) {
    twiddle[r] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
  }
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) acc += first_row[m] * twiddle[(m * k) % n];
    values[k] = acc.real();
  }
  return values;
}

double pgm_circulant_success(const DenseOperator& gram_matrix) {
  if (!is_circulant(gram_matrix.matrix())) {
    throw std::invalid_argument("pgm_circulant_success: Gram matrix is not circulant");
  }
  const auto n = static_cast<Eigen::Index>(gram_matrix.dim());
  std::vector<Complex> row(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = gram_matrix.matrix()(0, j);
  double root_sum = 0.0;
  for (double lambda : circulant_eigenvalues(row)) root_sum += std::sqrt(std::max(lambda, 0.0));
  const double nn = static_cast<double>(n);
  return root_sum * root_sum / (nn * nn);
}

// ---- limits and baselines -------------------------------------------------------

double asymptotic_success(int n, double theta, AsymptoticVariant variant, double p) {
  if (n < 2) throw std::invalid_argument("asymptotic_success: N must be >= 2");
  const double c = std::cos(2.0 * theta);
  const double s = std::abs(std::sin(2.0 * theta));
  const double nn = n;
  switch (variant) {
    case AsymptoticVariant::kEntangledExpansion:
      return 0.5 * (1.0 - c) + s / std::sqrt(nn) + 1.0 / nn - (1.0 - c) / nn;
    case AsymptoticVariant::kSeparableExpansion:
      return 0.5 * (1.0 - c) + s / std::sqrt(nn) + 1.0 / nn - 1.5 * (1.0 - c) / nn;
    case AsymptoticVariant::kPgmLimit:
      return 0.5 * (1.0 - c);
    case AsymptoticVariant::kUnambiguousLimit:
      // failure -> (1 + cos 2 theta)/2
      return 1.0 - 0.5 * (1.0 + c);
    case AsymptoticVariant::kNullLimit:
      require_probability(p, "p");
      return 0.5 * (1.0 - p) * (1.0 - c) + p * p / (p + 0.5 * (1.0 - p) * (1.0 + c));
  }
  throw std::logic_error("asymptotic_success: unknown variant");
}

double guessing_baseline(int n, std::optional<double> p) {
  if (n < 1) throw std::invalid_argument("guessing_baseline: N must be >= 1");
  if (!p) return 1.0 / n;
  require_probability(*p, "p");
  return std::max(*p, (1.0 - *p) / n);
}

}  // namespace qsnet
