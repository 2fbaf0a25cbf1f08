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

#include "altsha/integer.hpp"
#include "altsha/parallel.hpp"

namespace altsha {

/// y^2 = x^3 + A x + B.
struct CurveParams {
  Integer a;
  Integer b;

  friend bool operator==(const CurveParams&, const CurveParams&) = default;
};

/// max(|4A^3|, |27B^2|).
Integer curve_height(const CurveParams& c);

/// 4A^3 + 27B^2 != 0 and no prime p has p^4 | A and p^6 | B.
bool is_valid_curve(const Integer& a, const Integer& b);
bool is_valid_curve(std::int64_t a, std::int64_t b);

/// 2^{4/3} 3^{-3/2} / zeta(10): leading constant of #{E : height <= H} / H^{5/6}.
double curve_count_constant();

inline constexpr std::uint64_t kCurveCountCap = 100'000'000ULL;  // 10^8

/// Exact #{valid (A, B) : height <= H}, enumerated in parallel over A.
/// Throws std::domain_error when H exceeds `cap`.
std::uint64_t count_curves_exact(std::uint64_t h, std::uint64_t cap = kCurveCountCap,
                                 Execution exec = Execution::parallel);

/// Serial reference enumeration over the full (A, B) box, using the GMP
/// validity check. Kept for cross-checking count_curves_exact.
std::uint64_t count_curves_reference(std::uint64_t h);

inline constexpr double kMaxSampleHeight = 1e36;

/// Uniform valid curve with H/2 < height <= H by rejection from the box
/// |A| <= (H/4)^{1/3}, |B| <= (H/27)^{1/2}. Requires 100 <= H <= 10^36.
CurveParams sample_curve_in_band(const Integer& h, Rng& rng);

/// Same with H given as a double (rounded down to an integer).
CurveParams sample_curve_in_band(double h, Rng& rng);

/// Box half-widths floor((H/4)^{1/3}) and floor((H/27)^{1/2}).
struct SamplingBox {
  std::int64_t a_max;
  std::int64_t b_max;
};
SamplingBox sampling_box(const Integer& h);

}  // namespace altsha
