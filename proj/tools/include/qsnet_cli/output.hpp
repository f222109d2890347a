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

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qsnet/discrimination.hpp"
#include "qsnet/oracle.hpp"

namespace qsnet::cli {

struct SweepRow {
  DiscriminationReport report;
  double guessing_baseline = 0.0;
};

/// Column order of sweep/report tables.
const std::vector<std::string>& sweep_columns();

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_real(double value);

/// Orders by (strategy, N, theta, p); rows without p sort first.
void sort_rows(std::vector<SweepRow>& rows);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_json(std::ostream& out, const std::vector<SweepRow>& rows);

/// One line per record followed by "PASS m/n".
void write_verification(std::ostream& out, const std::vector<VerificationRecord>& records);

}  // namespace qsnet::cli
