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

// Flat key = value run configuration.
//
//   # comment
//   seed = 42
//   survey.h_grid = 1e6, 1e12, 1e18
//
// Keys are fixed (see schema()); values are checked against the key's type
// when set. A run manifest (JSON with a "config" object) is accepted too.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "altsha/integer.hpp"
#include "json.hpp"

namespace altsha::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ValueType { u64, i64, f64, text, heights, bounds };

struct ConfigKey {
  std::string name;
  ValueType type;
  std::string fallback;
  std::string doc;
};

const std::vector<ConfigKey>& schema();

class Config {
 public:
  /// All keys at their defaults.
  Config();

  void set(const std::string& key, const std::string& value);
  /// "key=value".
  void set_assignment(const std::string& assignment);
  void load_file(const std::string& path);

  const std::string& raw(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::int64_t i64(const std::string& key) const;
  double f64(const std::string& key) const;
  std::vector<Integer> heights(const std::string& key) const;
  std::vector<std::int64_t> bounds(const std::string& key) const;

  nlohmann::ordered_json to_json() const;
  /// The loadable text form, in schema order, with docs as comments.
  std::string to_text(bool with_docs) const;

 private:
  std::map<std::string, std::string> values_;
};

/// "1000", "1e12", "2.5e10" as an exact integer; throws ConfigError otherwise.
Integer parse_height(const std::string& text);
/// "5..20" or "2, 3, 7".
std::vector<std::int64_t> parse_bounds(const std::string& text);
/// Decimal or a fraction "1/12".
double parse_real(const std::string& text);

}  // namespace altsha::cli
