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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "altsha/exact_linalg.hpp"
#include "altsha/integer.hpp"
#include "altsha/model_sampler.hpp"
#include "altsha/parallel.hpp"

namespace altsha {

/// box: every |a_ij| <= bound. l2: |A|^2 = sum over all n^2 entries
/// = 2 sum_{i<j} a_ij^2, and |A| < bound strictly.
enum class Norm { box, l2 };

std::string to_string(Norm n);
Norm parse_norm(const std::string& name);

struct RankHistogram {
  unsigned n = 0;
  std::int64_t bound = 0;
  Norm norm = Norm::box;
  std::map<unsigned, std::uint64_t> counts;

  std::uint64_t total() const;
  std::uint64_t count(unsigned rank) const;
};

inline constexpr std::uint64_t kCountingCap = 1'000'000'000ULL;

/// Number of upper-triangle vectors the enumeration visits before any
/// norm filtering: (2m+1)^{n(n-1)/2} with m the largest admissible |entry|.
/// Saturates at UINT64_MAX.
std::uint64_t enumeration_size(unsigned n, std::int64_t bound, Norm norm);

/// Exact histogram of ranks. Work is split on the first two entries and
/// merged by addition. Throws std::domain_error when enumeration_size > cap.
RankHistogram count_alternating_by_rank(unsigned n, std::int64_t bound, Norm norm, std::uint64_t cap = kCountingCap,
                                        Execution exec = Execution::parallel);

/// Plain odometer over the box with GMP ranks; reference for the above.
RankHistogram count_alternating_by_rank_serial(unsigned n, std::int64_t bound, Norm norm,
                                               std::uint64_t cap = 10'000'000ULL);

struct CountingPoint {
  std::int64_t bound;
  std::uint64_t count;
  std::uint64_t total;
  bool used;
};

struct CountingFit {
  unsigned n = 0;
  unsigned r = 0;
  Norm norm = Norm::box;
  std::vector<CountingPoint> points;
  /// Bounds left out of the fit because count < min_count.
  std::vector<std::int64_t> skipped;
  /// l2: log N_{n,r}(T) against log T, target n r / 2.
  /// box: log #{corank >= r} against log(2X+1), target n(n-r)/2.
  PowerFit fit{};
  double target = 0;
  /// box only: the fraction #{corank >= r} / (2X+1)^{n(n-1)/2} against
  /// log(2X+1), target n(n-r)/2 - n(n-1)/2.
  std::optional<PowerFit> fraction_fit;
  double fraction_target = 0;
  /// box only: the same two fits with log X as abscissa.
  std::optional<PowerFit> fit_vs_bound;
  std::optional<PowerFit> fraction_fit_vs_bound;
};

/// Needs at least four bounds and at least three surviving points.
CountingFit fit_counting_exponent(unsigned n, unsigned r, const std::vector<std::int64_t>& bounds, Norm norm,
                                  std::uint64_t min_count = 20, std::uint64_t cap = kCountingCap,
                                  Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Lattices

struct LatticeBasis {
  std::vector<std::vector<Integer>> vectors;

  LatticeBasis() = default;
  /// Throws std::invalid_argument on ragged input.
  explicit LatticeBasis(std::vector<std::vector<Integer>> v);
  static LatticeBasis from_int(const std::vector<std::vector<std::int64_t>>& v);

  std::size_t rank() const { return vectors.size(); }
  std::size_t dim() const { return vectors.empty() ? 0 : vectors.front().size(); }
  bool independent() const;
};

Integer inner_product(const std::vector<Integer>& u, const std::vector<Integer>& v);
IntegerMatrix gram_matrix(const LatticeBasis& b);
/// d(Lambda)^2.
Integer gram_det(const LatticeBasis& b);

/// R_ij = l_i l_j^T - l_j l_i^T for i < j, ordered (1,2), (1,3), ..., (r-1,r).
std::vector<AlternatingMatrix> build_R_basis(const LatticeBasis& b);

/// Sum of a_kl b_kl over all n^2 entries.
Integer frobenius_inner(const AlternatingMatrix& a, const AlternatingMatrix& b);

/// (R_ij, R_st) = 2 (l_i,l_s)(l_j,l_t) - 2 (l_i,l_t)(l_j,l_s) for every pair.
bool check_inner_product_identity(const LatticeBasis& b);

/// det Gram(R) = 2^{r(r-1)/2} det Gram(l)^{r-1}. Throws std::domain_error
/// for a dependent basis.
bool check_det_identity(const LatticeBasis& b);

/// Fraction of random n x n alternating matrices (entries uniform in
/// [-x, x]) with squarefree |Pf|; Pf = 0 counts as not squarefree.
Estimate squarefree_pfaffian_fraction(unsigned n, std::int64_t x, std::uint64_t samples, std::uint64_t seed,
                                      Execution exec = Execution::parallel);

}  // namespace altsha
