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

#include "qsnet_cli/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <tuple>

#include "json.hpp"

namespace qsnet::cli {

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns = {
      "strategy",   "N",          "k",        "theta",    "p",
      "probe",      "closed_form_success",    "numeric_success",
      "failure_prob", "error_prob", "abs_diff", "guessing_baseline", "degenerate"};
  return columns;
}

std::string format_real(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    const ReportParameters& x = a.report.parameters;
    const ReportParameters& y = b.report.parameters;
    return std::tie(a.report.strategy, x.n, x.theta, x.p) < std::tie(b.report.strategy, y.n, y.theta, y.p);
  });
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  const auto& columns = sweep_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const SweepRow& row : rows) {
    const DiscriminationReport& r = row.report;
    const ReportParameters& q = r.parameters;
    out << r.strategy << ',' << q.n << ',' << (q.k ? std::to_string(*q.k) : "") << ',' << format_real(q.theta)
        << ',' << (q.p ? format_real(*q.p) : "") << ',' << q.probe << ',' << format_real(r.closed_form_success)
        << ',' << format_real(r.numeric_success) << ',' << format_real(r.failure_prob) << ','
        << format_real(r.error_prob) << ',' << format_real(r.abs_diff) << ',' << format_real(row.guessing_baseline)
        << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const SweepRow& row : rows) {
    const DiscriminationReport& r = row.report;
    const ReportParameters& q = r.parameters;
    nlohmann::ordered_json rec;
    rec["strategy"] = r.strategy;
    rec["N"] = q.n;
    rec["k"] = q.k ? nlohmann::ordered_json(*q.k) : nlohmann::ordered_json(nullptr);
    rec["theta"] = q.theta;
    rec["p"] = q.p ? nlohmann::ordered_json(*q.p) : nlohmann::ordered_json(nullptr);
    rec["probe"] = q.probe;
    rec["closed_form_success"] = r.closed_form_success;
    rec["numeric_success"] = r.numeric_success;
    rec["failure_prob"] = r.failure_prob;
    rec["error_prob"] = r.error_prob;
    rec["abs_diff"] = r.abs_diff;
    rec["guessing_baseline"] = row.guessing_baseline;
    rec["degenerate"] = r.degenerate;
    array.push_back(std::move(rec));
  }
  out << array.dump(2) << '\n';
}

namespace {

std::string describe(const RecordParameters& p) {
  std::string s;
  const auto add = [&s](const std::string& part) { s += (s.empty() ? "" : " ") + part; };
  if (p.n) add("N=" + std::to_string(*p.n));
  if (p.k) add("k=" + std::to_string(*p.k));
  if (p.theta) add("theta=" + format_real(*p.theta));
  if (p.p) add("p=" + format_real(*p.p));
  return s.empty() ? "-" : s;
}

}  // namespace

void write_verification(std::ostream& out, const std::vector<VerificationRecord>& records) {
  std::size_t passed = 0;
  for (const VerificationRecord& r : records) {
    const char* status = r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL");
    if (r.passed) ++passed;
    out << status << ' ' << r.check_name << ' ' << describe(r.parameters);
    if (!r.skipped) {
      out << " expected=" << format_real(r.expected) << " observed=" << format_real(r.observed)
          << " tolerance=" << format_real(r.tolerance);
    }
    if (!r.note.empty()) out << " (" << r.note << ')';
    out << '\n';
  }
  out << "PASS " << passed << '/' << records.size() << '\n';
}

}  // namespace qsnet::cli
