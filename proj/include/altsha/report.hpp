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

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace altsha {

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double v);
std::string format_double(double v, int precision);

/// Comma-separated rows; fields containing ',', '"' or newlines are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

struct RunManifest {
  std::string command;
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::string version;
  /// Short name of the claim the run exercises, e.g. "rank-exponent".
  std::string topic;
  /// CSV schema tag, bumped whenever the column set changes.
  std::string csv_schema;
  std::vector<std::string> outputs;

  nlohmann::ordered_json to_json() const;
};

/// UTC, ISO 8601 to the second.
std::string utc_timestamp();

std::string library_version();

}  // namespace altsha
