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

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace altsha::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

template <class T>
bool parse_int(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

const ConfigKey& find_key(const std::string& name) {
  for (const auto& k : schema())
    if (k.name == name) return k;
  throw ConfigError("unknown config key '" + name + "'");
}

void check_value(const ConfigKey& k, const std::string& v) {
  switch (k.type) {
    case ValueType::u64: {
      std::uint64_t x;
      if (!parse_int(v, x)) throw ConfigError(k.name + ": expected an unsigned integer, got '" + v + "'");
      break;
    }
    case ValueType::i64: {
      std::int64_t x;
      if (!parse_int(v, x)) throw ConfigError(k.name + ": expected an integer, got '" + v + "'");
      break;
    }
    case ValueType::f64:
      parse_real(v);
      break;
    case ValueType::text:
      if (v.empty()) throw ConfigError(k.name + ": empty value");
      break;
    case ValueType::heights:
      for (const auto& h : split(v, ',')) parse_height(h);
      break;
    case ValueType::bounds:
      parse_bounds(v);
      break;
  }
}

}  // namespace

const std::vector<ConfigKey>& schema() {
  static const std::vector<ConfigKey> keys{
      {"seed", ValueType::u64, "20260101", "master seed"},
      {"threads", ValueType::u64, "0", "worker threads; 0 = OpenMP default"},
      {"out", ValueType::text, "altsha-out", "output directory"},
      {"samples", ValueType::u64, "10000", "draws per grid point or conditioned samples"},
      {"model.eta_schedule", ValueType::text, "log3_floor", "log3_floor | fixed"},
      {"model.fixed_eta", ValueType::f64, "2", "eta when model.eta_schedule = fixed"},
      {"model.x_min", ValueType::i64, "2", "lower clamp on X(H)"},
      {"model.calibration_exponent", ValueType::f64, "1/12", "c in X^eta = H^c"},
      {"survey.h_grid", ValueType::heights, "1e6,1e12,1e18", "band tops H; curves drawn from (H/2, H]"},
      {"sha.n", ValueType::u64, "10", "matrix size"},
      {"sha.x", ValueType::i64, "10000", "entry bound"},
      {"sha.r", ValueType::u64, "0", "conditioned corank, 0 or 1"},
      {"sha.p", ValueType::u64, "2", "prime"},
      {"sha.max_log_order", ValueType::u64, "8", "support of the comparison table: log_p #G <= this"},
      {"cl.n", ValueType::u64, "8", "matrix size"},
      {"cl.p", ValueType::u64, "2", "prime"},
      {"cl.k", ValueType::u64, "8", "starting p-adic precision"},
      {"cl.max_log_order", ValueType::u64, "6", "support of the comparison table: log_p #G <= this"},
      {"count.n", ValueType::u64, "3", "matrix size"},
      {"count.r", ValueType::u64, "2", "rank (l2) or corank threshold (box)"},
      {"count.norm", ValueType::text, "l2", "l2 | box"},
      {"count.bounds", ValueType::bounds, "5..20", "T (l2) or X (box) values"},
      {"count.min_count", ValueType::u64, "20", "points with fewer matrices are left out of the fit"},
      {"count.cap", ValueType::u64, "1000000000", "largest enumeration allowed"},
      {"period.h_lo", ValueType::heights, "1e3", "lowest scan height"},
      {"period.h_hi", ValueType::heights, "1e24", "highest scan height"},
      {"period.tol", ValueType::f64, "1e-9", "required period accuracy"},
      {"table.h", ValueType::heights, "1e10,1e11,1e12,1e13,1e14,1e15", "heights for predicted-table"},
  };
  return keys;
}

Integer parse_height(const std::string& text) {
  const std::string s = trim(text);
  const auto bad = [&] { return ConfigError("bad height '" + s + "'"); };
  if (s.empty()) throw bad();
  const auto epos = s.find_first_of("eE");
  const std::string mant = s.substr(0, epos);
  long exp10 = 0;
  if (epos != std::string::npos && !parse_int(s.substr(epos + 1), exp10)) throw bad();
  const auto dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw bad();
  Integer v(digits, 10);
  if (exp10 > 60) throw bad();
  for (; exp10 > 0; --exp10) v *= 10;
  for (; exp10 < 0; ++exp10) {
    if (v % 10 != 0) throw ConfigError("height '" + s + "' is not an integer");
    v /= 10;
  }
  return v;
}

std::vector<std::int64_t> parse_bounds(const std::string& text) {
  const std::string s = trim(text);
  std::vector<std::int64_t> out;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    std::int64_t lo, hi;
    if (!parse_int(trim(s.substr(0, dots)), lo) || !parse_int(trim(s.substr(dots + 2)), hi) || lo > hi || hi - lo > 10000)
      throw ConfigError("bad range '" + s + "'");
    for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  for (const auto& item : split(s, ',')) {
    std::int64_t v;
    if (!parse_int(item, v)) throw ConfigError("bad bound '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty bound list");
  return out;
}

double parse_real(const std::string& text) {
  const std::string s = trim(text);
  const auto one = [&](const std::string& part) {
    double v = 0;
    const char* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ConfigError("bad number '" + s + "'");
    return v;
  };
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const double den = one(trim(s.substr(slash + 1)));
    if (den == 0) throw ConfigError("bad number '" + s + "'");
    return one(trim(s.substr(0, slash))) / den;
  }
  return one(s);
}

Config::Config() {
  for (const auto& k : schema()) values_[k.name] = k.fallback;
}

void Config::set(const std::string& key, const std::string& value) {
  const ConfigKey& k = find_key(key);
  const std::string v = trim(value);
  check_value(k, v);
  values_[key] = v;
}

void Config::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) throw ConfigError(path + ": no \"config\" object");
    for (const auto& [key, value] : j["config"].items())
      set(key, value.is_string() ? value.get<std::string>() : value.dump());
    return;
  }
  std::istringstream lines(text);
  std::string line;
  for (int lineno = 1; std::getline(lines, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    try {
      set_assignment(line);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

const std::string& Config::raw(const std::string& key) const {
  find_key(key);
  return values_.at(key);
}

std::uint64_t Config::u64(const std::string& key) const {
  std::uint64_t v = 0;
  parse_int(raw(key), v);
  return v;
}

std::int64_t Config::i64(const std::string& key) const {
  std::int64_t v = 0;
  parse_int(raw(key), v);
  return v;
}

double Config::f64(const std::string& key) const { return parse_real(raw(key)); }

std::vector<Integer> Config::heights(const std::string& key) const {
  std::vector<Integer> out;
  for (const auto& h : split(raw(key), ',')) out.push_back(parse_height(h));
  return out;
}

std::vector<std::int64_t> Config::bounds(const std::string& key) const { return parse_bounds(raw(key)); }

nlohmann::ordered_json Config::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& k : schema()) j[k.name] = values_.at(k.name);
  return j;
}

std::string Config::to_text(bool with_docs) const {
  std::ostringstream out;
  for (const auto& k : schema()) {
    if (with_docs) out << "# " << k.doc << " (default " << k.fallback << ")\n";
    out << k.name << " = " << values_.at(k.name) << '\n';
  }
  return out.str();
}

}  // namespace altsha::cli
