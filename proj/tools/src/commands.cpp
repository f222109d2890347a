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

#include "qsnet_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsnet/discrimination.hpp"
#include "qsnet/network.hpp"
#include "qsnet/oracle.hpp"
#include "qsnet_cli/config.hpp"
#include "qsnet_cli/output.hpp"

namespace qsnet::cli {

namespace {

const std::set<std::string> kKnownKeys = {"strategy", "n",       "k",      "theta",    "p",
                                          "probe",    "format",  "out",    "seed",     "restarts",
                                          "preset",   "tolerance", "objective", "degrees"};

const std::vector<std::string> kStrategies = {"min_error_two_detector", "unambiguous_two_detector",
                                              "one_or_none",            "pgm",
                                              "unambiguous_symmetric",  "pgm_with_null"};

std::string joined(const std::vector<std::string>& items) {
  std::string s;
  for (const std::string& i : items) s += (s.empty() ? "" : ", ") + i;
  return s;
}

// Flag values with config-file fallback.
class Settings {
 public:
  Settings(std::map<std::string, CLI::Option*> options, std::map<std::string, std::string>& flag_values,
           ConfigMap config, bool degrees_flag)
      : options_(std::move(options)), flag_values_(flag_values), config_(std::move(config)),
        degrees_flag_(degrees_flag) {}

  std::optional<std::string> get(const std::string& key) const {
    const auto opt = options_.find(key);
    if (opt != options_.end() && opt->second->count() > 0) return flag_values_.at(key);
    const auto cfg = config_.find(key);
    if (cfg != config_.end()) return cfg->second;
    return std::nullopt;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
  }

  bool degrees() const {
    if (degrees_flag_) return true;
    const auto cfg = config_.find("degrees");
    return cfg != config_.end() && parse_bool("degrees", cfg->second);
  }

 private:
  std::map<std::string, CLI::Option*> options_;
  std::map<std::string, std::string>& flag_values_;
  ConfigMap config_;
  bool degrees_flag_;
};

std::vector<double> thetas_from(const Settings& s) {
  const auto raw = s.get("theta");
  if (!raw) throw UsageError("theta: required");
  std::vector<double> values = parse_angle_list("theta", *raw, s.degrees());
  for (double t : values) {
    if (std::abs(t) > kMaxTheta + 1e-12) {
      throw UsageError("theta: " + format_real(t) + " rad lies outside [-pi/4, pi/4]");
    }
  }
  return values;
}

std::vector<int> ns_from(const Settings& s, int fallback) {
  const auto raw = s.get("n");
  std::vector<int> values = raw ? parse_int_list("n", *raw) : std::vector<int>{fallback};
  for (int n : values) {
    if (n < 2) throw UsageError("n: N must be >= 2 (got " + std::to_string(n) + ")");
  }
  return values;
}

std::vector<double> ps_from(const Settings& s) {
  const auto raw = s.get("p");
  std::vector<double> values = raw ? parse_real_list("p", *raw) : std::vector<double>{0.5};
  for (double p : values) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p: " + format_real(p) + " lies outside [0, 1]");
  }
  return values;
}

std::string format_from(const Settings& s, const std::vector<std::string>& allowed) {
  const std::string f = s.get_or("format", allowed.front());
  if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
    throw UsageError("format: unknown '" + f + "' (expected one of " + joined(allowed) + ")");
  }
  return f;
}

// Writes to --out when given, standard output otherwise.
void emit(const Settings& s, const std::string& text, std::ostream& out) {
  const auto path = s.get("out");
  if (!path || *path == "-") {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("out: cannot write '" + *path + "'");
  file << text;
  file.flush();
  if (!file) throw IoError("out: write to '" + *path + "' failed");
}

// ---- sweep / report ---------------------------------------------------------

void require_two(int n, const std::string& strategy) {
  if (n != 2) throw UsageError("n: strategy " + strategy + " requires N = 2 (got " + std::to_string(n) + ")");
}

std::vector<SweepRow> compute_rows(const Settings& s, bool single) {
  const auto strategy_raw = s.get("strategy");
  if (!strategy_raw) throw UsageError("strategy: required (one of " + joined(kStrategies) + ")");
  const std::vector<std::string> strategies = split_list(*strategy_raw);
  if (strategies.empty()) throw UsageError("strategy: empty list");
  for (const std::string& st : strategies) {
    if (std::find(kStrategies.begin(), kStrategies.end(), st) == kStrategies.end()) {
      throw UsageError("strategy: unknown '" + st + "' (expected one of " + joined(kStrategies) + ")");
    }
  }
  const std::vector<int> ns = ns_from(s, 2);
  const std::vector<double> thetas = thetas_from(s);
  const std::vector<double> ps = ps_from(s);
  const std::string probe = s.get_or("probe", "entangled");
  if (probe != "entangled" && probe != "separable") {
    throw UsageError("probe: unknown '" + probe + "' (expected entangled or separable)");
  }
  std::optional<int> k;
  if (const auto raw = s.get("k")) k = parse_int("k", *raw);

  if (single) {
    if (strategies.size() != 1) throw UsageError("strategy: report takes a single strategy");
    if (ns.size() != 1) throw UsageError("n: report takes a single value");
    if (thetas.size() != 1) throw UsageError("theta: report takes a single value");
    if (ps.size() != 1) throw UsageError("p: report takes a single value");
  }

  std::vector<SweepRow> rows;
  for (const std::string& st : strategies) {
    const bool uses_p = st == "one_or_none" || st == "pgm_with_null";
    if (probe == "separable" && st != "pgm" && st != "one_or_none") {
      throw UsageError("probe: strategy " + st + " is defined for the entangled probe only");
    }
    if (k && !(st == "pgm" && probe == "entangled")) {
      throw UsageError("k: only meaningful for strategy pgm with the entangled probe");
    }
    for (int n : ns) {
      if (k && *k != n / 2) {
        throw UsageError("k: only the balanced value floor(N/2) = " + std::to_string(n / 2) + " is supported");
      }
      for (double theta : thetas) {
        const std::vector<std::optional<double>> p_points =
            uses_p ? std::vector<std::optional<double>>(ps.begin(), ps.end())
                   : std::vector<std::optional<double>>{std::nullopt};
        for (const std::optional<double>& p : p_points) {
          SweepRow row;
          try {
            if (st == "min_error_two_detector") {
              require_two(n, st);
              row.report = min_error_two_detector(theta).report;
              row.guessing_baseline = guessing_baseline(2);
            } else if (st == "unambiguous_two_detector") {
              require_two(n, st);
              row.report = unambiguous_two_detector(theta).report;
              row.guessing_baseline = guessing_baseline(2);
            } else if (st == "one_or_none") {
              require_two(n, st);
              row.report = one_or_none(*p, theta).report;
              row.guessing_baseline = guessing_baseline(1, *p);
            } else if (st == "pgm") {
              const ProbeFamily family = probe == "entangled" ? ProbeFamily::kEntangled : ProbeFamily::kSeparable;
              row.report = pgm_symmetric(n, theta, family).report;
              row.guessing_baseline = guessing_baseline(n);
            } else if (st == "unambiguous_symmetric") {
              row.report = unambiguous_symmetric(n, theta).report;
              row.guessing_baseline = guessing_baseline(n);
            } else {
              row.report = pgm_with_null(n, theta, *p).report;
              row.guessing_baseline = guessing_baseline(n, *p);
            }
          } catch (const UsageError&) {
            throw;
          } catch (const std::logic_error& e) {
            throw UsageError("strategy=" + st + " N=" + std::to_string(n) + " theta=" + format_real(theta) +
                             ": " + e.what());
          } catch (const std::runtime_error& e) {
            throw UsageError("strategy=" + st + " N=" + std::to_string(n) + " theta=" + format_real(theta) +
                             ": " + e.what());
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  sort_rows(rows);
  return rows;
}

int cmd_table(const Settings& s, std::ostream& out, bool single) {
  const std::string format = format_from(s, {"csv", "json"});
  const std::vector<SweepRow> rows = compute_rows(s, single);
  std::ostringstream text;
  if (format == "csv") {
    write_csv(text, rows);
  } else {
    write_json(text, rows);
  }
  emit(s, text.str(), out);
  return exit_code::kOk;
}

// ---- verify ---------------------------------------------------------------------

int cmd_verify(const Settings& s, std::ostream& out) {
  const std::string preset = s.get_or("preset", "default");
  const std::optional<VerificationGrid> grid = VerificationGrid::preset(preset);
  if (!grid) throw UsageError("preset: unknown '" + preset + "' (expected quick, default or deep)");
  std::optional<double> tolerance;
  if (const auto raw = s.get("tolerance")) {
    tolerance = parse_real("tolerance", *raw);
    if (*tolerance < 0.0) throw UsageError("tolerance: must be >= 0");
  }
  format_from(s, {"text"});
  const std::vector<VerificationRecord> records = run_verification_suite(*grid, tolerance);
  std::ostringstream text;
  write_verification(text, records);
  emit(s, text.str(), out);
  const bool ok = std::all_of(records.begin(), records.end(), [](const VerificationRecord& r) { return r.passed; });
  return ok ? exit_code::kOk : exit_code::kVerificationFailed;
}

// ---- optimize -------------------------------------------------------------------

// Global phase fixed so the largest-magnitude amplitude is real and positive.
Vector canonical_phase(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best)) + 1e-12) best = i;
  }
  const double phase = std::arg(v(best));
  return v * std::polar(1.0, -phase);
}

int cmd_optimize(const Settings& s, std::ostream& out) {
  const int n = parse_int("n", s.get_or("n", "2"));
  if (n < 2 || n > 6) throw UsageError("n: optimize supports N in 2..6 (got " + std::to_string(n) + ")");
  const std::vector<double> thetas = thetas_from(s);
  if (thetas.size() != 1) throw UsageError("theta: optimize takes a single value");
  const double theta = thetas.front();
  const std::string objective = s.get_or("objective", "min_overlap");
  const int restarts = parse_int("restarts", s.get_or("restarts", "200"));
  if (restarts < 1) throw UsageError("restarts: must be >= 1");
  const std::uint64_t seed = parse_seed("seed", s.get_or("seed", std::to_string(kDefaultSearchSeed)));
  const std::string format = format_from(s, {"csv", "json"});

  double value = 0.0;
  std::optional<double> reference;
  Vector coefficients;
  if (objective == "min_overlap") {
    if (n != 2) throw UsageError("objective: min_overlap is defined for N = 2 only");
    if (theta == 0.0) throw UsageError("theta: min_overlap requires theta != 0");
    const TriangleCoefficients best = minimize_two_detector_overlap(PhaseChannel(theta), restarts, seed);
    value = std::abs(best.z());
    reference = std::abs(std::cos(2.0 * theta));
    coefficients = best.as_vector();
  } else if (objective == "which_detector" || objective == "one_or_none") {
    const SearchObjective obj =
        objective == "which_detector" ? SearchObjective::kWhichDetectorPairwise : SearchObjective::kOneOrNoneOverlap;
    const ProbeSearchResult r = probe_search(n, theta, obj, restarts, seed);
    value = r.best_value;
    if (n == 2) reference = r.reference_value;
    coefficients = canonical_phase(r.best_probe);
  } else {
    throw UsageError("objective: unknown '" + objective + "' (expected min_overlap, which_detector or one_or_none)");
  }

  std::ostringstream text;
  if (format == "csv") {
    text << "field,value,imag\n";
    text << "objective," << objective << ",\n";
    text << "N," << n << ",\n";
    text << "theta," << format_real(theta) << ",\n";
    text << "seed," << seed << ",\n";
    text << "restarts," << restarts << ",\n";
    text << "value," << format_real(value) << ",\n";
    text << "reference," << (reference ? format_real(*reference) : "") << ",\n";
    for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
      text << "c" << i << ',' << format_real(coefficients(i).real()) << ',' << format_real(coefficients(i).imag())
           << '\n';
    }
  } else {
    nlohmann::ordered_json rec;
    rec["objective"] = objective;
    rec["N"] = n;
    rec["theta"] = theta;
    rec["seed"] = seed;
    rec["restarts"] = restarts;
    rec["value"] = value;
    rec["reference"] = reference ? nlohmann::ordered_json(*reference) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
      coeffs.push_back({coefficients(i).real(), coefficients(i).imag()});
    }
    rec["coefficients"] = std::move(coeffs);
    text << rec.dump(2) << '\n';
  }
  emit(s, text.str(), out);
  return exit_code::kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detector-network discrimination: sweeps, verification and probe optimization", "qsnet"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, std::string("key = value config file (default: $") + kConfigEnv + ")");

  std::map<std::string, std::string> flag_values;
  for (const std::string& key : kKnownKeys) flag_values[key];
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> registered;
  bool degrees = false;

  const auto add = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    registered[sub][key] = sub->add_option("--" + key, flag_values[key], help);
  };
  const auto common_table = [&](CLI::App* sub) {
    add(sub, "strategy", "comma list: " + joined(kStrategies));
    add(sub, "n", "detector counts, comma list");
    add(sub, "k", "symmetric-probe excitation number (floor(N/2) only)");
    add(sub, "theta", "angles, comma list of values or start:stop:count");
    add(sub, "p", "prior of the no-interaction hypothesis, comma list");
    add(sub, "probe", "entangled or separable");
    add(sub, "format", "csv or json");
    add(sub, "out", "output file (default: standard output)");
    sub->add_flag("--degrees", degrees, "read theta in degrees");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "table over a parameter grid");
  common_table(sweep);
  CLI::App* report = app.add_subcommand("report", "single-point table row");
  common_table(report);
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  add(verify, "preset", "quick, default or deep");
  add(verify, "tolerance", "override every check tolerance");
  add(verify, "format", "text");
  add(verify, "out", "output file (default: standard output)");
  CLI::App* optimize = app.add_subcommand("optimize", "randomized probe optimization");
  add(optimize, "n", "detector count, 2..6");
  add(optimize, "theta", "angle");
  add(optimize, "objective", "min_overlap, which_detector or one_or_none");
  add(optimize, "restarts", "number of random restarts");
  add(optimize, "seed", "random seed");
  add(optimize, "format", "csv or json");
  add(optimize, "out", "output file (default: standard output)");
  optimize->add_flag("--degrees", degrees, "read theta in degrees");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("qsnet");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return exit_code::kOk;
    }
    err << "qsnet: " << e.what() << '\n';
    return exit_code::kUsage;
  }

  try {
    ConfigMap config;
    if (!config_path.empty()) {
      config = read_config(config_path);
    } else if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
      config = read_config(env);
    }
    for (const auto& [key, value] : config) {
      if (!kKnownKeys.contains(key)) throw UsageError("config: unknown key '" + key + "'");
    }
    CLI::App* chosen = app.get_subcommands().front();
    const Settings settings(registered[chosen], flag_values, config, degrees);
    if (chosen == sweep) return cmd_table(settings, out, false);
    if (chosen == report) return cmd_table(settings, out, true);
    if (chosen == verify) return cmd_verify(settings, out);
    return cmd_optimize(settings, out);
  } catch (const UsageError& e) {
    err << "qsnet: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const IoError& e) {
    err << "qsnet: " << e.what() << '\n';
    return exit_code::kIo;
  } catch (const std::logic_error& e) {
    err << "qsnet: " << e.what() << '\n';
    return exit_code::kUsage;
  }
}

}  // namespace qsnet::cli
