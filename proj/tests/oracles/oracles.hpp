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

// Independent reference implementations used by the tests, the acceptance
// binary and the `verify` subcommand.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "altsha/exact_linalg.hpp"
#include "altsha/integer.hpp"

namespace altsha::oracle {

/// Determinant by cofactor expansion along the first row.
Integer cofactor_determinant(const IntegerMatrix& m);

/// Pfaffian by expansion along the first row.
Integer pfaffian_expansion(const AlternatingMatrix& a);

/// Cokernel from determinantal divisors: d_k = gcd of all k x k minors,
/// invariant factors d_k / d_{k-1}. Only sensible for small matrices.
CokernelStructure cokernel_by_minors(const IntegerMatrix& m);

/// Real roots of x^3 + A x + B in decreasing order, by bisection.
std::vector<long double> bisection_roots(long double a, long double b);

/// Integral of dx / sqrt(x^3 + A x + B) over the set where the cubic is
/// positive, by double-exponential quadrature after substitutions that
/// remove the endpoint singularities.
double quadrature_period(long double a, long double b);

/// For square m with 0 < |det m| = D <= 64, the numbers
/// #{x in Z^n / m Z^n : d x = 0} for every divisor d of D, by listing
/// (Z/D)^n and the subgroup generated by the columns of m in it.
std::map<std::uint64_t, std::uint64_t> quotient_kernel_counts(const IntegerMatrix& m);

/// The same numbers read off invariant factors: prod_i gcd(d, e_i).
std::map<std::uint64_t, std::uint64_t> kernel_counts_from(const CokernelStructure& c, std::uint64_t order);

}  // namespace altsha::oracle
