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

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace altsha {

/// Arbitrary-precision signed integer used for every exact quantity.
using Integer = mpz_class;

using int128 = __int128;

inline Integer to_integer(std::int64_t v) {
  Integer z;
  mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
  return z;
}

inline Integer to_integer(int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  Integer hi;
  mpz_set_ui(hi.get_mpz_t(), static_cast<unsigned long>(u >> 64));
  Integer lo;
  mpz_set_ui(lo.get_mpz_t(), static_cast<unsigned long>(u & 0xffffffffffffffffULL));
  Integer z = (hi << 64) + lo;
  return neg ? Integer(-z) : z;
}

/// True when v fits in a signed 64-bit integer.
inline bool fits_int64(const Integer& v) { return mpz_fits_slong_p(v.get_mpz_t()) != 0; }

inline std::int64_t to_int64(const Integer& v) { return mpz_get_si(v.get_mpz_t()); }

inline std::string to_string(const Integer& v) { return v.get_str(10); }

bool is_perfect_square(const Integer& v);

/// Deterministic primality for 64-bit inputs (GMP's BPSW is exact below 2^64).
bool is_prime(std::uint64_t p);

/// p-adic valuation of a nonzero integer.
unsigned valuation(const Integer& v, std::uint64_t p);

/// Squarefree test by trial division; |v| must not exceed 10^18.
/// Zero is not squarefree.
bool is_squarefree(const Integer& v);

}  // namespace altsha
