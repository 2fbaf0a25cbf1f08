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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "config.hpp"

using namespace altsha;
using namespace altsha::cli;

TEST_CASE("heights") {
  CHECK(parse_height("1000") == 1000);
  CHECK(parse_height("1e6") == 1000000);
  CHECK(parse_height(" 2.5e3 ") == 2500);
  CHECK(parse_height("1e30") == Integer("1000000000000000000000000000000"));
  CHECK_THROWS_AS(parse_height("2.5"), ConfigError);
  CHECK_THROWS_AS(parse_height("-5"), ConfigError);
  CHECK_THROWS_AS(parse_height("1e"), ConfigError);
  CHECK_THROWS_AS(parse_height(""), ConfigError);
}

TEST_CASE("bounds and reals") {
  CHECK(parse_bounds("5..8") == std::vector<std::int64_t>{5, 6, 7, 8});
  CHECK(parse_bounds("2, 3,7") == std::vector<std::int64_t>{2, 3, 7});
  CHECK_THROWS_AS(parse_bounds("8..5"), ConfigError);
  CHECK_THROWS_AS(parse_bounds("a,b"), ConfigError);
  CHECK(parse_real("1/12") == doctest::Approx(1.0 / 12));
  CHECK(parse_real("1e-9") == 1e-9);
  CHECK_THROWS_AS(parse_real("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_real("1,5"), ConfigError);
}

TEST_CASE("config defaults, overrides and type checks") {
  Config c;
  CHECK(c.u64("seed") == 20260101);
  CHECK(c.f64("model.calibration_exponent") == doctest::Approx(1.0 / 12));
  CHECK(c.heights("survey.h_grid").size() == 3);
  c.set("seed", "42");
  c.set_assignment("count.bounds = 1..3");
  CHECK(c.u64("seed") == 42);
  CHECK(c.bounds("count.bounds").size() == 3);
  CHECK_THROWS_AS(c.set("seed", "-1"), ConfigError);
  CHECK_THROWS_AS(c.set("seed", "x"), ConfigError);
  CHECK_THROWS_AS(c.set("nosuch", "1"), ConfigError);
  CHECK_THROWS_AS(c.set_assignment("seed"), ConfigError);
  CHECK(c.to_json()["seed"] == "42");
}

TEST_CASE("text and manifest round trips") {
  Config c;
  c.set("samples", "123");
  c.set("survey.h_grid", "1e6,1e9");
  const std::string text_path = "test_config_roundtrip.cfg";
  const std::string json_path = "test_config_roundtrip.json";
  {
    std::ofstream(text_path) << c.to_text(true);
    nlohmann::ordered_json m{{"command", "simulate"}, {"config", c.to_json()}};
    std::ofstream(json_path) << m.dump(2);
  }
  Config a, b;
  a.load_file(text_path);
  b.load_file(json_path);
  CHECK(a.to_text(false) == c.to_text(false));
  CHECK(b.to_text(false) == c.to_text(false));
  {
    std::ofstream(text_path) << "seed = 1\nbogus line\n";
  }
  CHECK_THROWS_AS(a.load_file(text_path), ConfigError);
  CHECK_THROWS_AS(a.load_file("does-not-exist.cfg"), ConfigError);
  std::remove(text_path.c_str());
  std::remove(json_path.c_str());
}
