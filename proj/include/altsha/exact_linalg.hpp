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

/**
 * @brief Exact integer matrix kernel: rank, determinant, Pfaffian, Smith
 * normal form and cokernel structure.
 *
 * Everything here is a pure function of its (immutable) arguments and is safe
 * to call concurrently on distinct or shared inputs.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "altsha/groups.hpp"
#include "altsha/integer.hpp"

namespace altsha {

/// Dense row-major integer matrix.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntegerMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries);

  static IntegerMatrix identity(std::size_t n);
  static IntegerMatrix diagonal(std::size_t rows, std::size_t cols, std::span<const Integer> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const Integer> entries() const { return entries_; }

  IntegerMatrix transpose() const;

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

/// n x n alternating matrix stored by its strict upper triangle
/// (a_01, a_02, ..., a_0{n-1}, a_12, ...). Diagonal is zero and a_ji = -a_ij.
class AlternatingMatrix {
 public:
  explicit AlternatingMatrix(std::size_t n) : n_(n), upper_(n * (n ? n - 1 : 0) / 2) {}
  AlternatingMatrix(std::size_t n, std::vector<Integer> upper);

  /// Throws if m is not alternating.
  static AlternatingMatrix from_full(const IntegerMatrix& m);

  std::size_t size() const { return n_; }
  std::span<const Integer> upper() const { return upper_; }

  Integer at(std::size_t i, std::size_t j) const;
  /// Sets a_ij (and implicitly a_ji = -v); requires i != j.
  void set(std::size_t i, std::size_t j, const Integer& v);

  IntegerMatrix to_full() const;

  friend bool operator==(const AlternatingMatrix&, const AlternatingMatrix&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;  // i < j

  std::size_t n_;
  std::vector<Integer> upper_;
};

/// U * A * V = diag(divisors) padded with zeros; U and V unimodular.
struct SmithDecomposition {
  IntegerMatrix U;
  IntegerMatrix V;
  /// min(rows, cols) entries: nonzero invariant factors d1 | d2 | ... then zeros.
  std::vector<Integer> divisors;
};

/// Z^rows / A Z^cols  decomposed as  Z^free_rank + (+)_i Z/e_i.
struct CokernelStructure {
  std::size_t free_rank = 0;
  /// Invariant factors e1 | e2 | ..., each >= 2.
  std::vector<Integer> torsion;

  Integer torsion_order() const;
  /// "[e1,e2,...]"
  std::string label() const;
  /// Torsion is Z/e + Z/e for some e >= 1 (the trivial group counts).
  bool is_square_of_cyclic() const;

  friend bool operator==(const CokernelStructure&, const CokernelStructure&) = default;
};

std::size_t rank(const IntegerMatrix& a);
std::size_t rank(const AlternatingMatrix& a);

/// Rank via fraction-free elimination over GMP integers, never taking the
/// 64-bit fast path.
std::size_t rank_bareiss(const IntegerMatrix& a);

/// n - rank(A); always congruent to n mod 2.
std::size_t kernel_rank(const AlternatingMatrix& a);

Integer determinant(const IntegerMatrix& a);

/// Pfaffian with Pf(A)^2 = det(A). Odd n returns 0; n = 0 returns 1.
Integer pfaffian(const AlternatingMatrix& a);

/// Minimal-|pivot| Smith normal form with unimodular transforms.
SmithDecomposition smith_normal_form(const IntegerMatrix& a);

/// Divisor chain only (same as smith_normal_form(a).divisors, no transforms).
std::vector<Integer> smith_divisors(const IntegerMatrix& a);

CokernelStructure cokernel(const IntegerMatrix& a);
CokernelStructure cokernel(const AlternatingMatrix& a);

/// p-primary part of the cokernel torsion. Throws std::invalid_argument
/// when p is not prime.
AbelianPGroup p_part(const CokernelStructure& c, std::uint64_t p);
AbelianPGroup cokernel_p_part(const AlternatingMatrix& a, std::uint64_t p);

/// Torsion factors of an alternating cokernel pair up (e1=e2, e3=e4, ...).
bool has_paired_torsion(const CokernelStructure& c);

}  // namespace altsha
