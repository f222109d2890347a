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

#include "qsnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace qsnet {

VerificationRecord make_record(std::string check_name, RecordParameters parameters, double expected,
                               double observed, double tolerance, std::string note) {
  VerificationRecord r;
  r.check_name = std::move(check_name);
  r.parameters = parameters;
  r.expected = expected;
  r.observed = observed;
  r.tolerance = tolerance;
  r.passed = std::abs(expected - observed) <= tolerance;
  r.note = std::move(note);
  return r;
}

VerificationRecord skipped_record(std::string check_name, RecordParameters parameters, std::string reason) {
  VerificationRecord r = make_record(std::move(check_name), parameters, 0.0, 0.0, 0.0, std::move(reason));
  r.skipped = true;
  return r;
}

std::vector<VerificationRecord> validate_povm(const Povm& povm, std::size_t dim) {
  std::vector<VerificationRecord> out;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const double lowest = povm[i].min_eigenvalue();
    out.push_back(make_record("povm.positivity[" + std::to_string(i) + "]", {}, 0.0, std::max(0.0, -lowest),
                              verify_tolerance::kPositivity, "min eigenvalue " + std::to_string(lowest)));
  }
  if (povm.dim() != dim) {
    out.push_back(make_record("povm.completeness", {}, 0.0, std::numeric_limits<double>::infinity(),
                              verify_tolerance::kClosedForm,
                              "POVM acts on dim " + std::to_string(povm.dim()) + ", expected " +
                                  std::to_string(dim)));
  } else {
    out.push_back(make_record("povm.completeness", {}, 0.0, povm.completeness_error(),
                              verify_tolerance::kClosedForm));
  }
  return out;
}

Probabilities numeric_probabilities(const HypothesisEnsemble& ensemble, const Povm& povm,
                                    const OutcomeMap& outcome_map,
                                    const std::vector<std::size_t>& hypothesis_class) {
  if (outcome_map.size() != povm.size()) {
    throw std::invalid_argument("numeric_probabilities: outcome map has " + std::to_string(outcome_map.size()) +
                                " entries for " + std::to_string(povm.size()) + " POVM elements");
  }
  if (!hypothesis_class.empty() && hypothesis_class.size() != ensemble.size()) {
    throw std::invalid_argument("numeric_probabilities: hypothesis class length != ensemble size");
  }
  if (povm.dim() != ensemble.dim()) {
    throw std::invalid_argument("numeric_probabilities: POVM and ensemble dimensions differ");
  }
  const auto dim = static_cast<Eigen::Index>(ensemble.dim());
  const auto m = static_cast<Eigen::Index>(ensemble.size());

  // born(i, j) = <phi_j|Pi_i|phi_j>
  Eigen::MatrixXd born(static_cast<Eigen::Index>(povm.size()), m);
  if (ensemble.dim() <= Povm::kDenseCompletenessCap) {
    Matrix states(dim, m);
    for (Eigen::Index j = 0; j < m; ++j) states.col(j) = ensemble.states[static_cast<std::size_t>(j)].amplitudes();
    for (std::size_t i = 0; i < povm.size(); ++i) {
      const Matrix applied = povm[i].to_dense() * states;
      for (Eigen::Index j = 0; j < m; ++j) {
        born(static_cast<Eigen::Index>(i), j) = states.col(j).dot(applied.col(j)).real();
      }
    }
  } else {
    for (std::size_t i = 0; i < povm.size(); ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        born(static_cast<Eigen::Index>(i), j) =
            povm[i].expectation(ensemble.states[static_cast<std::size_t>(j)].amplitudes());
      }
    }
  }

  Probabilities out;
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto js = static_cast<std::size_t>(j);
    const std::size_t cls = hypothesis_class.empty() ? js : hypothesis_class[js];
    for (std::size_t i = 0; i < povm.size(); ++i) {
      const double w = ensemble.priors[js] * born(static_cast<Eigen::Index>(i), j);
      switch (outcome_map[i].kind) {
        case Outcome::Kind::kFailure:
          out.failure += w;
          break;
        case Outcome::Kind::kHypothesis:
          (outcome_map[i].hypothesis == cls ? out.success : out.error) += w;
          break;
        case Outcome::Kind::kUnassigned:
          out.error += w;
          break;
      }
    }
  }
  return out;
}

namespace {

double brute_force_separable_pgm(int n, double theta) {
  if (n <= kFullSpaceMaxN) {
    const HypothesisEnsemble e = hypothesis_states(build_probe(ProbeSpec::separable(n)), PhaseChannel(theta));
    const StrategyResult r = pgm_numeric(e, PgmRoute::kFullSpace);
    return numeric_probabilities(*r.ensemble, *r.povm, r.outcome_map).success;
  }
  const DenseOperator g = equicorrelated_gram(n, separable_overlap_closed(theta));
  return pgm_gram_success(g, std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

}  // namespace

VerificationRecord resolve_separable_reading(int n, double theta) {
  const RecordParameters params{.n = n, .k = std::nullopt, .theta = theta, .p = std::nullopt};
  const double brute = brute_force_separable_pgm(n, theta);
  const double plus = pgm_separable_closed(n, theta);
  const double equals = pgm_separable_first_line(n, theta);
  const double tol = verify_tolerance::kClosedForm;
  std::string matching;
  if (std::abs(plus - brute) <= tol) matching += "'+'";
  if (std::abs(equals - brute) <= tol) matching += matching.empty() ? "'='" : " and '='";
  if (matching.empty()) matching = "none";
  return make_record("separable_pgm.reading", params, brute, plus, tol,
                     "matching reading: " + matching + "; '=' reading gives " + std::to_string(equals));
}

std::vector<VerificationRecord> verify_null_state_relation(int n, double theta) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("verify_null_state_relation: N must be even");
  if (n > kFullSpaceMaxN) throw std::invalid_argument("verify_null_state_relation: N above full-space cap");
  const RecordParameters params{.n = n, .k = n / 2, .theta = theta, .p = std::nullopt};
  const PhaseChannel channel(theta);
  const Ket probe = build_probe(ProbeSpec::symmetric_balanced(n));
  const HypothesisEnsemble e = hypothesis_states(probe, channel);

  Vector h = Vector::Zero(static_cast<Eigen::Index>(e.dim()));
  for (const Ket& s : e.states) h += s.amplitudes();
  h /= static_cast<double>(n);
  const double overlap = std::abs(probe.amplitudes().dot(h) / h.norm());

  const double c = std::cos(2.0 * theta);
  const double r0 = 0.5 * (1.0 + c);
  const double r1 = (1.0 - c) / (2.0 * (n - 1.0));
  double sum = 0.0;
  for (const Ket& s : e.states) {
    const Vector ej = (s.amplitudes() - h) / std::sqrt(n * r1) + h / std::sqrt(n * r0);
    sum += std::norm(ej.dot(probe.amplitudes()));
  }
  const double printed = std::abs((1.0 + std::polar(1.0, -theta)) / (2.0 * std::sqrt(r0)));
  return {
      make_record("null_state.overlap_with_mean", params, 1.0, overlap, verify_tolerance::kPositivity,
                  "printed scalar has modulus " + std::to_string(printed)),
      make_record("null_state.measurement_sum", params, 1.0, sum, verify_tolerance::kClosedForm),
  };
}

// ---- probe search ---------------------------------------------------------------

namespace {

class ProbeObjective {
 public:
  ProbeObjective(int n, double theta, SearchObjective objective)
      : n_(n), channel_(theta), objective_(objective) {}

  // Larger is better for both objectives.
  double score(const Vector& v) const {
    const double value = evaluate(v);
    return objective_ == SearchObjective::kWhichDetectorPairwise ? value : -value;
  }

  double evaluate(const Vector& v) const {
    const Ket probe(v);
    std::vector<Ket> states;
    states.reserve(static_cast<std::size_t>(n_));
    for (int site = 1; site <= n_; ++site) states.push_back(channel_.apply(probe, site, n_));
    if (objective_ == SearchObjective::kOneOrNoneOverlap) {
      double worst = 0.0;
      for (const Ket& s : states) worst = std::max(worst, std::abs(probe.inner(s)));
      return worst;
    }
    double worst = 1.0;
    for (std::size_t a = 0; a < states.size(); ++a) {
      for (std::size_t b = a + 1; b < states.size(); ++b) {
        const double f = std::norm(states[a].inner(states[b]));
        worst = std::min(worst, 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - f))));
      }
    }
    return worst;
  }

 private:
  int n_;
  PhaseChannel channel_;
  SearchObjective objective_;
};

Vector random_direction(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

constexpr int kLocalSteps = 300;

}  // namespace

ProbeSearchResult probe_search(int n, double theta, SearchObjective objective, int budget, std::uint64_t seed) {
  if (budget <= 0) throw std::invalid_argument("probe_search: budget must be positive");
  if (n < 2 || n > 6) throw std::invalid_argument("probe_search: N must lie in 2..6");
  const ProbeObjective target(n, theta, objective);
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::mt19937_64 rng(seed);

  ProbeSearchResult out;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < budget; ++restart) {
    Vector x = random_direction(dim, rng).normalized();
    double fx = target.score(x);
    double sigma = 0.3;
    // (1+1) evolution strategy on the sphere, one-fifth success rule.
    for (int step = 0; step < kLocalSteps && sigma > 1e-9; ++step) {
      const Vector y = (x + sigma * random_direction(dim, rng)).normalized();
      const double fy = target.score(y);
      if (fy >= fx) {
        x = y;
        fx = fy;
        sigma *= 1.5;
      } else {
        sigma *= 0.9;
      }
    }
    if (fx > best_score) {
      best_score = fx;
      out.best_probe = x;
    }
  }
  out.best_value = target.evaluate(out.best_probe);

  const bool which = objective == SearchObjective::kWhichDetectorPairwise;
  if (which) {
    const double g = n == 2 ? std::cos(2.0 * theta) : symmetric_overlap_closed(n, n / 2, theta);
    out.reference_value = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - g * g)));
  } else {
    out.reference_value = std::abs(std::cos(theta));
  }

  const RecordParameters params{.n = n, .k = std::nullopt, .theta = theta, .p = std::nullopt};
  const std::string name = which ? "probe_search.which_detector" : "probe_search.one_or_none";
  const std::string detail = "best " + std::to_string(out.best_value) + ", reference " +
                             std::to_string(out.reference_value) + ", restarts " + std::to_string(budget);
  if (n == 2) {
    // Excess of the best probe found over the reference probe.
    const double excess = which ? std::max(0.0, out.best_value - out.reference_value)
                                : std::max(0.0, out.reference_value - out.best_value);
    out.record = make_record(name, params, 0.0, excess,
                             which ? verify_tolerance::kOptimizer : verify_tolerance::kFiniteDifference, detail);
  } else {
    out.record = make_record(name + ".exploratory", params, out.reference_value, out.best_value,
                             verify_tolerance::kUnbounded, detail + " (data only)");
  }
  return out;
}

// ---- suite ----------------------------------------------------------------------

VerificationGrid VerificationGrid::quick() {
  return {.n_values = {2, 3, 4, 6}, .theta_values = {0.1, 0.3, 0.5, 0.7}, .p_values = {0.0, 0.5, 0.9},
          .search_budget = 20};
}

VerificationGrid VerificationGrid::standard() {
  return {.n_values = {2, 4, 6, 8, 10},
          .theta_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7},
          .p_values = {0.0, 0.25, 0.5, 0.9},
          .search_budget = 50};
}

VerificationGrid VerificationGrid::deep() {
  return {.n_values = {2, 3, 4, 5, 6, 8, 10, 12},
          .theta_values = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, std::numbers::pi / 4.0},
          .p_values = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9},
          .search_budget = 200};
}

std::optional<VerificationGrid> VerificationGrid::preset(const std::string& name) {
  if (name == "quick") return quick();
  if (name == "default") return standard();
  if (name == "deep") return deep();
  return std::nullopt;
}

namespace {

void append(std::vector<VerificationRecord>& out, std::vector<VerificationRecord> more,
            const RecordParameters& params, const std::string& prefix) {
  for (VerificationRecord& r : more) {
    r.check_name = prefix + "." + r.check_name;
    r.parameters = params;
    out.push_back(std::move(r));
  }
}

void two_detector_checks(double theta, std::vector<VerificationRecord>& out) {
  const RecordParameters params{.n = 2, .k = 1, .theta = theta, .p = std::nullopt};
  const double tol = verify_tolerance::kClosedForm;

  const StrategyResult me = min_error_two_detector(theta);
  const Probabilities pm = numeric_probabilities(*me.ensemble, *me.povm, me.outcome_map);
  out.push_back(make_record("min_error_two_detector.success", params, me.report.closed_form_success, pm.success, tol));
  // The printed labeling must be the better of the two.
  const OutcomeMap swapped = {Outcome::hypothesis_of(1), Outcome::hypothesis_of(0), Outcome::unassigned()};
  const double other = numeric_probabilities(*me.ensemble, *me.povm, swapped).success;
  out.push_back(make_record("min_error_two_detector.labeling", params, 0.0, std::max(0.0, other - pm.success), tol,
                            "swapped labeling success " + std::to_string(other)));
  append(out, validate_povm(*me.povm, 4), params, "min_error_two_detector");

  const StrategyResult ua = unambiguous_two_detector(theta);
  const Probabilities pu = numeric_probabilities(*ua.ensemble, *ua.povm, ua.outcome_map);
  out.push_back(make_record("unambiguous_two_detector.success", params, ua.report.closed_form_success, pu.success, tol));
  out.push_back(make_record("unambiguous_two_detector.error", params, 0.0, pu.error, verify_tolerance::kExactZero));
  append(out, validate_povm(*ua.povm, 4), params, "unambiguous_two_detector");
}

void one_or_none_checks(double p0, double theta, std::vector<VerificationRecord>& out) {
  const RecordParameters params{.n = 2, .k = std::nullopt, .theta = theta, .p = p0};
  const double tol = verify_tolerance::kClosedForm;
  out.push_back(make_record("one_or_none.trace_norm", params, one_or_none_trace_norm_closed(p0, theta),
                            trace_norm(one_or_none_lambda(p0, theta)), tol));
  const StrategyResult r = one_or_none(p0, theta);
  const Probabilities pr = numeric_probabilities(*r.ensemble, *r.povm, r.outcome_map, r.hypothesis_class);
  out.push_back(make_record("one_or_none.success", params, r.report.closed_form_success, pr.success, tol));
}

void symmetric_checks(int n, double theta, const std::vector<double>& p_values,
                      std::vector<VerificationRecord>& out) {
  const double tol = verify_tolerance::kClosedForm;
  const RecordParameters params{.n = n, .k = n / 2, .theta = theta, .p = std::nullopt};
  const PhaseChannel channel(theta);
  const HypothesisEnsemble entangled =
      hypothesis_states(build_probe(ProbeSpec::symmetric_balanced(n)), channel);

  if (n % 2 != 0) {
    for (const char* name : {"pgm_entangled.closed_form", "unambiguous_symmetric.failure", "pgm_with_null.closed_form"}) {
      out.push_back(skipped_record(name, params, "odd N: no closed form for the entangled probe"));
    }
  } else {
    // Closed form against the generic rho^{-1/2} construction.
    const StrategyResult brute = pgm_numeric(entangled, PgmRoute::kFullSpace);
    const Probabilities pb = numeric_probabilities(*brute.ensemble, *brute.povm, brute.outcome_map);
    out.push_back(make_record("pgm_entangled.closed_form", params, pgm_symmetric_closed(n, theta), pb.success, tol));
    // And against the explicit closed-form measurement vectors.
    const StrategyResult vectors = pgm_symmetric(n, theta, ProbeFamily::kEntangled);
    const Probabilities pv = numeric_probabilities(*vectors.ensemble, *vectors.povm, vectors.outcome_map);
    out.push_back(make_record("pgm_entangled.measurement_vectors", params, vectors.report.closed_form_success,
                              pv.success, tol));
    append(out, validate_povm(*vectors.povm, vectors.ensemble->dim()), params, "pgm_entangled");

    const StrategyResult ua = unambiguous_symmetric(n, theta);
    const Probabilities pu = numeric_probabilities(*ua.ensemble, *ua.povm, ua.outcome_map);
    out.push_back(make_record("unambiguous_symmetric.failure", params,
                              unambiguous_symmetric_failure_closed(n, theta), pu.failure, tol));
    out.push_back(make_record("unambiguous_symmetric.error", params, 0.0, pu.error, verify_tolerance::kExactZero));
    append(out, validate_povm(*ua.povm, ua.ensemble->dim()), params, "unambiguous_symmetric");

    for (VerificationRecord& r : verify_null_state_relation(n, theta)) out.push_back(std::move(r));

    for (double p : p_values) {
      const RecordParameters pp{.n = n, .k = n / 2, .theta = theta, .p = p};
      if (p >= 1.0) {
        out.push_back(skipped_record("pgm_with_null.closed_form", pp, "p = 1: single hypothesis"));
        continue;
      }
      const HypothesisEnsemble with_null =
          hypothesis_states(build_probe(ProbeSpec::symmetric_balanced(n)), channel, true, p);
      const StrategyResult nb = pgm_numeric(with_null, PgmRoute::kFullSpace);
      const Probabilities pn = numeric_probabilities(*nb.ensemble, *nb.povm, nb.outcome_map);
      out.push_back(make_record("pgm_with_null.closed_form", pp, pgm_with_null_closed(n, theta, p), pn.success, tol));
      if (p == 0.0) {
        out.push_back(make_record("pgm_with_null.no_null_limit", pp, pgm_symmetric_closed(n, theta),
                                  pgm_with_null_closed(n, theta, 0.0), tol));
      }
    }
  }

  const RecordParameters sep{.n = n, .k = std::nullopt, .theta = theta, .p = std::nullopt};
  VerificationRecord reading = resolve_separable_reading(n, theta);
  reading.parameters = sep;
  out.push_back(std::move(reading));
}

}  // namespace

std::vector<VerificationRecord> run_verification_suite(const VerificationGrid& grid,
                                                       std::optional<double> tolerance_override) {
  if (grid.n_values.empty() || grid.theta_values.empty()) {
    throw std::invalid_argument("run_verification_suite: empty grid");
  }
  std::vector<VerificationRecord> out;
  const bool has_two = std::find(grid.n_values.begin(), grid.n_values.end(), 2) != grid.n_values.end();

  for (double theta : grid.theta_values) {
    if (theta == 0.0) continue;
    if (has_two) {
      two_detector_checks(theta, out);
      for (double p0 : grid.p_values) one_or_none_checks(p0, theta, out);
      out.push_back(probe_search(2, theta, SearchObjective::kWhichDetectorPairwise, grid.search_budget).record);
      out.push_back(probe_search(2, theta, SearchObjective::kOneOrNoneOverlap, grid.search_budget).record);
    }
    for (int n : grid.n_values) {
      if (n < 2 || n > kFullSpaceMaxN) continue;
      symmetric_checks(n, theta, grid.p_values, out);
    }
  }
  if (has_two) {
    const RecordParameters params{.n = 2, .k = std::nullopt, .theta = std::nullopt, .p = 0.5};
    out.push_back(make_record("one_or_none.small_theta_slope", params, 1.0 / (2.0 * std::numbers::sqrt2),
                              small_theta_sensitivity(0.5), verify_tolerance::kFiniteDifference));
  }

  if (tolerance_override) {
    for (VerificationRecord& r : out) {
      if (r.skipped) continue;
      r.tolerance = *tolerance_override;
      r.passed = std::abs(r.expected - r.observed) <= r.tolerance;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const VerificationRecord& a, const VerificationRecord& b) {
    if (a.check_name != b.check_name) return a.check_name < b.check_name;
    return a.parameters < b.parameters;
  });
  return out;
}

}  // namespace qsnet
