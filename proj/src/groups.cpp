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

#include "altsha/groups.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace altsha {

AbelianPGroup::AbelianPGroup(std::uint64_t p) : AbelianPGroup(p, {}) {}

AbelianPGroup::AbelianPGroup(std::uint64_t p, std::vector<unsigned> exponents)
    : p_(p), exponents_(std::move(exponents)) {
  if (!is_prime(p)) throw std::invalid_argument("AbelianPGroup: " + std::to_string(p) + " is not prime");
  std::erase(exponents_, 0u);
  std::sort(exponents_.begin(), exponents_.end(), std::greater<>());
}

unsigned AbelianPGroup::log_order() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), 0u);
}

Integer AbelianPGroup::order() const {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p_), log_order());
  return out;
}

unsigned AbelianPGroup::log_torsion_size(unsigned k) const {
  unsigned s = 0;
  for (unsigned e : exponents_) s += std::min(e, k);
  return s;
}

std::string AbelianPGroup::label() const {
  std::string s = std::to_string(p_) + ":[";
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(exponents_[i]);
  }
  return s + "]";
}

AbelianPGroup SymplecticPGroup::underlying() const {
  std::vector<unsigned> doubled;
  for (unsigned e : half_.exponents()) {
    doubled.push_back(e);
    doubled.push_back(e);
  }
  return AbelianPGroup(half_.prime(), std::move(doubled));
}

bool has_doubled_partition(const AbelianPGroup& g) {
  auto e = g.exponents();
  if (e.size() % 2) return false;
  for (std::size_t i = 0; i < e.size(); i += 2)
    if (e[i] != e[i + 1]) return false;
  return true;
}

SymplecticPGroup SymplecticPGroup::from_underlying(const AbelianPGroup& g) {
  if (!has_doubled_partition(g))
    throw std::invalid_argument("group " + g.label() + " does not have a doubled partition");
  std::vector<unsigned> half;
  auto e = g.exponents();
  for (std::size_t i = 0; i < e.size(); i += 2) half.push_back(e[i]);
  return SymplecticPGroup(AbelianPGroup(g.prime(), std::move(half)));
}

AbelianPGroup parse_group_label(const std::string& label) {
  const auto colon = label.find(':');
  if (colon == std::string::npos || label.size() < colon + 3 || label[colon + 1] != '[' ||
      label.back() != ']')
    throw std::invalid_argument("malformed group label '" + label + "'");
  const std::uint64_t p = std::stoull(label.substr(0, colon));
  std::vector<unsigned> parts;
  const std::string body = label.substr(colon + 2, label.size() - colon - 3);
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t next = body.find(',', pos);
    if (next == std::string::npos) next = body.size();
    parts.push_back(static_cast<unsigned>(std::stoul(body.substr(pos, next - pos))));
    pos = next + 1;
  }
  return AbelianPGroup(p, std::move(parts));
}

namespace {

// Partitions of `total` with parts at most `max_part`, largest first.
void partitions(unsigned total, unsigned max_part, std::vector<unsigned>& cur,
                std::vector<std::vector<unsigned>>& out) {
  if (total == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned part = std::min(total, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions(total - part, part, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<AbelianPGroup> abelian_groups_up_to(std::uint64_t p, unsigned max_log_order) {
  std::vector<AbelianPGroup> out;
  for (unsigned k = 0; k <= max_log_order; ++k) {
    std::vector<std::vector<unsigned>> parts;
    std::vector<unsigned> cur;
    partitions(k, k, cur, parts);
    for (auto& lam : parts) out.emplace_back(p, std::move(lam));
  }
  return out;
}

std::vector<SymplecticPGroup> symplectic_groups_up_to(std::uint64_t p, unsigned max_log_order) {
  std::vector<SymplecticPGroup> out;
  for (auto& j : abelian_groups_up_to(p, max_log_order / 2)) out.emplace_back(std::move(j));
  return out;
}

}  // namespace altsha
