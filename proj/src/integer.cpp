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

#include "altsha/integer.hpp"

#include <cmath>
#include <stdexcept>

namespace altsha {

bool is_perfect_square(const Integer& v) {
  if (v < 0) return false;
  return mpz_perfect_square_p(v.get_mpz_t()) != 0;
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  Integer z;
  mpz_set_ui(z.get_mpz_t(), static_cast<unsigned long>(p));
  return mpz_probab_prime_p(z.get_mpz_t(), 30) != 0;
}

unsigned valuation(const Integer& v, std::uint64_t p) {
  if (v == 0) throw std::domain_error("valuation of zero is infinite");
  Integer q = abs(v);
  unsigned e = 0;
  while (mpz_divisible_ui_p(q.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
    ++e;
  }
  return e;
}

bool is_squarefree(const Integer& v) {
  if (v == 0) return false;
  Integer m = abs(v);
  if (m > Integer("1000000000000000000"))
    throw std::domain_error("is_squarefree: |v| exceeds 10^18");
  std::uint64_t n = static_cast<std::uint64_t>(mpz_get_ui(m.get_mpz_t()));
  // After removing every prime below n^(1/3), the cofactor has at most two
  // prime factors, so it is squarefree unless it is a perfect square.
  for (std::uint64_t d = 2; d * d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    n /= d;
    if (n % d == 0) return false;
  }
  if (n == 1) return true;
  std::uint64_t s = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s * s != n;
}

}  // namespace altsha
