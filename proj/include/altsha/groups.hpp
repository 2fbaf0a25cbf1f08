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

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "altsha/integer.hpp"

namespace altsha {

/// Finite abelian p-group  Z/p^{l1} + ... + Z/p^{lm}  with l1 >= ... >= lm >= 1.
class AbelianPGroup {
 public:
  /// Trivial group; p must be prime.
  explicit AbelianPGroup(std::uint64_t p);
  /// Exponents may be given in any order; zeros are dropped.
  AbelianPGroup(std::uint64_t p, std::vector<unsigned> exponents);

  std::uint64_t prime() const { return p_; }
  std::span<const unsigned> exponents() const { return exponents_; }
  bool trivial() const { return exponents_.empty(); }
  /// Number of cyclic factors, i.e. dim G[p].
  std::size_t p_rank() const { return exponents_.size(); }
  /// log_p of the order.
  unsigned log_order() const;
  Integer order() const;
  /// log_p #G[p^k].
  unsigned log_torsion_size(unsigned k) const;

  /// "p:[l1,l2,...]"
  std::string label() const;

  friend bool operator==(const AbelianPGroup&, const AbelianPGroup&) = default;
  friend auto operator<=>(const AbelianPGroup&, const AbelianPGroup&) = default;

 private:
  std::uint64_t p_;
  std::vector<unsigned> exponents_;
};

/// J x J^dual with its canonical alternating pairing.
class SymplecticPGroup {
 public:
  explicit SymplecticPGroup(AbelianPGroup half) : half_(std::move(half)) {}

  /// Accepts a group whose partition is doubled; throws otherwise.
  static SymplecticPGroup from_underlying(const AbelianPGroup& g);

  const AbelianPGroup& half() const { return half_; }
  AbelianPGroup underlying() const;
  std::uint64_t prime() const { return half_.prime(); }
  unsigned log_order() const { return 2 * half_.log_order(); }
  /// Label of the underlying abelian group.
  std::string label() const { return underlying().label(); }

  friend bool operator==(const SymplecticPGroup&, const SymplecticPGroup&) = default;

 private:
  AbelianPGroup half_;
};

inline std::string group_label(const AbelianPGroup& g) { return g.label(); }
inline std::string group_label(const SymplecticPGroup& s) { return s.label(); }

/// Parses "p:[l1,...]" back into a group; inverse of label().
AbelianPGroup parse_group_label(const std::string& label);

/// True if every part occurs an even number of times.
bool has_doubled_partition(const AbelianPGroup& g);

/// All abelian p-groups of order p^k with k <= max_log_order.
std::vector<AbelianPGroup> abelian_groups_up_to(std::uint64_t p, unsigned max_log_order);

/// All symplectic p-groups with order p^{2k}, 2k <= max_log_order.
std::vector<SymplecticPGroup> symplectic_groups_up_to(std::uint64_t p, unsigned max_log_order);

}  // namespace altsha
