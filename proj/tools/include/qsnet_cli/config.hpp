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

// Flat `key = value` config files and the list/range syntax shared by
// flags and config values.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsnet::cli {

/// Environment variable naming a default config file.
inline constexpr const char* kConfigEnv = "QSNET_CONFIG";

/// Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigMap = std::map<std::string, std::string>;

/// One `key = value` per line; '#' starts a comment; blank lines ignored.
/// Later keys override earlier ones.
ConfigMap parse_config(std::istream& in, const std::string& source);
ConfigMap read_config(const std::string& path);

std::vector<std::string> split_list(const std::string& text);

int parse_int(const std::string& field, const std::string& text);
std::uint64_t parse_seed(const std::string& field, const std::string& text);
double parse_real(const std::string& field, const std::string& text);

std::vector<int> parse_int_list(const std::string& field, const std::string& text);
std::vector<double> parse_real_list(const std::string& field, const std::string& text);

/// Comma-separated angles; each item is a value or an inclusive
/// `start:stop:count` range. Degrees are converted with pi/180.
std::vector<double> parse_angle_list(const std::string& field, const std::string& text, bool degrees);

bool parse_bool(const std::string& field, const std::string& text);

}  // namespace qsnet::cli
