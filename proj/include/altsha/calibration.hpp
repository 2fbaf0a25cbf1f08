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

#include <array>
#include <cstdint>
#include <vector>

#include "altsha/curves.hpp"
#include "altsha/integer.hpp"
#include "altsha/parallel.hpp"

namespace altsha {

/// -16 (4A^3 + 27B^2).
Integer discriminant(const Integer& a, const Integer& b);

struct PeriodResult {
  /// Integral of |dx / 2y| over all of E(R).
  double omega;
  double est_error;
  /// 2 when the discriminant is positive, else 1.
  unsigned components;
};

/// Real period of y^2 = x^3 + A x + B from the real roots of the cubic and
/// the arithmetic-geometric mean, in long double. Throws std::domain_error on
/// a singular curve and std::runtime_error if `tol` is not reached.
PeriodResult real_period(long double a, long double b, double tol = 1e-12);
PeriodResult real_period(const Integer& a, const Integer& b, double tol = 1e-12);

/// Real roots of x^3 + A x + B in decreasing order, Newton-polished.
std::vector<long double> real_cubic_roots(long double a, long double b);

struct PeriodSample {
  CurveParams curve;
  Integer height;
  Integer disc;
  double omega;
  /// omega * H^{1/12}.
  double normalized;
  /// omega * H^{1/12} / log H.
  double normalized_log;
};

struct SummaryStats {
  double min = 0;
  double max = 0;
  /// 5, 25, 50, 75, 95 percent.
  std::array<double, 5> quantiles{};
};

SummaryStats summarize(std::vector<double> v);

struct PeriodScan {
  std::vector<PeriodSample> samples;
  SummaryStats normalized;
  SummaryStats normalized_log;
};

/// Samples heights log-uniformly in [h_lo, h_hi], one curve per height from
/// the band (H/2, H], and records the normalized periods. Needs samples >= 100
/// and 100 <= h_lo <= h_hi <= 10^36. Periods are computed to within `tol`.
PeriodScan period_bound_scan(double h_lo, double h_hi, std::uint64_t samples, std::uint64_t seed,
                             double tol = 1e-9, Execution exec = Execution::parallel);

inline constexpr std::uint64_t kDivisorCountCap = 1'000'000'000'000'000'000ULL;

/// Number of positive divisors of m, 1 <= m <= 10^18. Trial division up to
/// the cube root of the remaining cofactor leaves at most two prime factors,
/// told apart by a primality and a perfect-square test.
std::uint64_t divisor_count(std::uint64_t m);

}  // namespace altsha
