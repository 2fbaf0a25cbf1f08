/*
 * Copyright 2026 The altsha Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Exact-identity and reproduction suites behind `altsha verify`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace altsha::verify {

struct Check {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  /// First failure, or a measured quantity worth reporting.
  std::string detail;

  bool passed() const { return failures == 0 && trials > 0; }
};

struct Report {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
  nlohmann::ordered_json to_json() const;
  /// One "PASS|FAIL name (failures/trials) detail" line per check.
  std::string to_text() const;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument on an unknown suite.
Report run_suite(const std::string& suite, std::uint64_t seed);

Report lattice_suite(std::uint64_t seed, std::uint64_t bases = 1000);
/// Pf^2 = det, U A V = diag, paired invariant factors, and exhaustive small
/// cokernels against two independent oracles.
Report snf_suite(std::uint64_t seed);
Report table_suite();
Report period_suite(std::uint64_t seed);

}  // namespace altsha::verify
