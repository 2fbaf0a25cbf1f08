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

#include "altsha/curves.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace altsha {

namespace {

std::uint64_t uabs(std::int64_t v) { return v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v); }

bool divisible_pow(std::uint64_t v, std::uint64_t p, unsigned k) {
  for (unsigned i = 0; i < k; ++i) {
    if (v % p) return false;
    v /= p;
  }
  return true;
}

// Does some prime p satisfy p^4 | a and p^6 | b? Zero is divisible by all.
// Such a p has p^4 | gcd(a, b).
bool has_non_minimal_prime(std::uint64_t a, std::uint64_t b) {
  std::uint64_t g = std::gcd(a, b);
  for (std::uint64_t p = 2; static_cast<unsigned __int128>(p) * p * p * p <= g; p += (p == 2 ? 1 : 2)) {
    if (g % p) continue;
    if (divisible_pow(a, p, 4) && divisible_pow(b, p, 6)) return true;
    while (g % p == 0) g /= p;
  }
  return false;
}

int128 cube(std::int64_t a) { return static_cast<int128>(a) * a * a; }

int128 height128(std::int64_t a, std::int64_t b) {
  int128 x = 4 * cube(a);
  if (x < 0) x = -x;
  const int128 y = 27 * static_cast<int128>(b) * b;
  return x > y ? x : y;
}

int128 to_int128(const Integer& v) {
  if (fits_int64(v)) return to_int64(v);
  const Integer hi = v >> 64;
  const Integer lo = v - (hi << 64);
  return (static_cast<int128>(to_int64(hi)) << 64) + static_cast<int128>(mpz_get_ui(lo.get_mpz_t()));
}

}  // namespace

Integer curve_height(const CurveParams& c) {
  Integer x = 4 * c.a * c.a * c.a;
  Integer y = 27 * c.b * c.b;
  x = abs(x);
  return x > y ? x : y;
}

bool is_valid_curve(std::int64_t a, std::int64_t b) {
  if (4 * cube(a) + 27 * static_cast<int128>(b) * b == 0) return false;
  return !has_non_minimal_prime(uabs(a), uabs(b));
}

bool is_valid_curve(const Integer& a, const Integer& b) {
  if (fits_int64(a) && fits_int64(b) && abs(a) < Integer("2000000000000") && abs(b) < Integer("1000000000000000000"))
    return is_valid_curve(to_int64(a), to_int64(b));
  if (4 * a * a * a + 27 * b * b == 0) return false;
  const Integer ua = abs(a), ub = abs(b);
  Integer g, p4, p6;
  mpz_gcd(g.get_mpz_t(), ua.get_mpz_t(), ub.get_mpz_t());
  for (unsigned long p = 2;; p += (p == 2 ? 1 : 2)) {
    mpz_ui_pow_ui(p4.get_mpz_t(), p, 4);
    if (p4 > g) return true;
    if (!mpz_divisible_ui_p(g.get_mpz_t(), p)) continue;
    mpz_ui_pow_ui(p6.get_mpz_t(), p, 6);
    if (mpz_divisible_p(ua.get_mpz_t(), p4.get_mpz_t()) && mpz_divisible_p(ub.get_mpz_t(), p6.get_mpz_t()))
      return false;
    while (mpz_divisible_ui_p(g.get_mpz_t(), p)) mpz_divexact_ui(g.get_mpz_t(), g.get_mpz_t(), p);
  }
}

double curve_count_constant() {
  // zeta(10) = pi^10 / 93555
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double zeta10 = std::pow(pi, 10) / 93555.0L;
  return static_cast<double>(std::pow(2.0L, 4.0L / 3.0L) * std::pow(3.0L, -1.5L) / zeta10);
}

SamplingBox sampling_box(const Integer& h) {
  if (h < 0) throw std::invalid_argument("sampling_box: negative height");
  Integer a = h / 4, b = h / 27;
  mpz_root(a.get_mpz_t(), a.get_mpz_t(), 3);
  mpz_sqrt(b.get_mpz_t(), b.get_mpz_t());
  return {to_int64(a), to_int64(b)};
}

std::uint64_t count_curves_exact(std::uint64_t h, std::uint64_t cap, Execution exec) {
  if (h > cap) throw std::domain_error("count_curves_exact: H=" + std::to_string(h) + " exceeds cap " + std::to_string(cap));
  Integer hz;
  mpz_set_ui(hz.get_mpz_t(), static_cast<unsigned long>(h));
  const SamplingBox box = sampling_box(hz);
  const std::size_t width = static_cast<std::size_t>(2 * box.a_max + 1);
  auto per_a = run_tasks<std::uint64_t>(
      width,
      [&](std::size_t t) {
        const std::int64_t a = static_cast<std::int64_t>(t) - box.a_max;
        std::uint64_t c = 0;
        for (std::int64_t b = -box.b_max; b <= box.b_max; ++b)
          if (is_valid_curve(a, b)) ++c;
        return c;
      },
      exec);
  return std::accumulate(per_a.begin(), per_a.end(), std::uint64_t{0});
}

std::uint64_t count_curves_reference(std::uint64_t h) {
  Integer hz;
  mpz_set_ui(hz.get_mpz_t(), static_cast<unsigned long>(h));
  // Generous box; the height test does the real filtering.
  const auto a_lim = static_cast<std::int64_t>(std::cbrt(static_cast<double>(h) / 4.0)) + 2;
  const auto b_lim = static_cast<std::int64_t>(std::sqrt(static_cast<double>(h) / 27.0)) + 2;
  std::uint64_t count = 0;
  for (std::int64_t a = -a_lim; a <= a_lim; ++a)
    for (std::int64_t b = -b_lim; b <= b_lim; ++b) {
      CurveParams c{to_integer(a), to_integer(b)};
      if (curve_height(c) <= hz && is_valid_curve(c.a, c.b)) ++count;
    }
  return count;
}

CurveParams sample_curve_in_band(const Integer& h, Rng& rng) {
  if (h < 100) throw std::invalid_argument("sample_curve_in_band: H must be >= 100");
  if (h > Integer("1000000000000000000000000000000000000"))
    throw std::invalid_argument("sample_curve_in_band: H above 10^36");
  const SamplingBox box = sampling_box(h);
  const int128 h128 = to_int128(h);
  std::uniform_int_distribution<std::int64_t> da(-box.a_max, box.a_max), db(-box.b_max, box.b_max);
  for (;;) {
    const std::int64_t a = da(rng);
    const std::int64_t b = db(rng);
    const int128 ht = height128(a, b);
    if (2 * ht <= h128) continue;
    if (!is_valid_curve(a, b)) continue;
    return {to_integer(a), to_integer(b)};
  }
}

CurveParams sample_curve_in_band(double h, Rng& rng) {
  Integer hz;
  mpz_set_d(hz.get_mpz_t(), std::floor(h));
  return sample_curve_in_band(hz, rng);
}

}  // namespace altsha
