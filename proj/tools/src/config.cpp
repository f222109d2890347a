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

#include "qsnet_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

namespace qsnet::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& field, const std::string& raw, const char* what) {
  const std::string text = trim(raw);
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  // from_chars rejects a leading '+'; accept it for convenience.
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw UsageError(field + ": '" + text + "' is not " + what);
  }
  return value;
}

}  // namespace

ConfigMap parse_config(std::istream& in, const std::string& source) {
  ConfigMap out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError(source + ":" + std::to_string(number) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  return parse_config(in, path);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_int(const std::string& field, const std::string& text) {
  return parse_number<int>(field, text, "an integer");
}

std::uint64_t parse_seed(const std::string& field, const std::string& text) {
  return parse_number<std::uint64_t>(field, text, "a non-negative integer");
}

double parse_real(const std::string& field, const std::string& text) {
  const double v = parse_number<double>(field, text, "a number");
  if (!std::isfinite(v)) throw UsageError(field + ": value must be finite");
  return v;
}

std::vector<int> parse_int_list(const std::string& field, const std::string& text) {
  std::vector<int> out;
  for (const std::string& item : split_list(text)) out.push_back(parse_int(field, item));
  if (out.empty()) throw UsageError(field + ": empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) out.push_back(parse_real(field, item));
  if (out.empty()) throw UsageError(field + ": empty list");
  return out;
}

std::vector<double> parse_angle_list(const std::string& field, const std::string& text, bool degrees) {
  const double scale = degrees ? std::numbers::pi / 180.0 : 1.0;
  std::vector<double> out;
  for (const std::string& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_real(field, item) * scale);
      continue;
    }
    const auto second = item.find(':', colon + 1);
    if (second == std::string::npos || item.find(':', second + 1) != std::string::npos) {
      throw UsageError(field + ": range '" + item + "' must be start:stop:count");
    }
    const double start = parse_real(field, item.substr(0, colon));
    const double stop = parse_real(field, item.substr(colon + 1, second - colon - 1));
    const int count = parse_int(field, item.substr(second + 1));
    if (count < 1) throw UsageError(field + ": range count must be >= 1");
    if (count == 1) {
      out.push_back(start * scale);
      continue;
    }
    for (int i = 0; i < count; ++i) {
      // Endpoints are exact: the last point is `stop` itself.
      const double v = i == count - 1 ? stop : start + (stop - start) * i / (count - 1);
      out.push_back(v * scale);
    }
  }
  if (out.empty()) throw UsageError(field + ": empty list");
  return out;
}

bool parse_bool(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw UsageError(field + ": '" + t + "' is not a boolean");
}

}  // namespace qsnet::cli
