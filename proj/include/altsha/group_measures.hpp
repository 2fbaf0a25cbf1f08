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
#include <stdexcept>
#include <string>

#include "altsha/groups.hpp"
#include "altsha/integer.hpp"

namespace altsha {

/// A real number computed from a truncated infinite product, together with a
/// bound on |exact - value| due to the truncation.
struct MeasureValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Raised by the brute-force automorphism counters when the requested group
/// is beyond their configured cap.
class UnsupportedSize : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// #Aut G via the closed form for finite abelian p-groups.
Integer aut_order(const AbelianPGroup& g);

/// #Aut G by enumerating every endomorphism (images of the cyclic
/// generators) and keeping the injective ones. Throws UnsupportedSize when
/// the number of endomorphisms exceeds max_endomorphisms.
Integer aut_order_bruteforce(const AbelianPGroup& g, std::uint64_t max_endomorphisms = 100'000'000);

/// Number of automorphisms of J x J^dual preserving the canonical pairing.
///
/// Counted as the number of symplectic bases (x_i, y_i): the pairing-preserving
/// automorphisms act simply transitively on them, and splitting off the
/// hyperbolic plane <x_1, y_1> for the largest part l gives
///   #Sp(G) = (#G - #G[p^{l-1}]) * (#G / p^l) * #Sp(G')
/// where G' drops one copy of l from J. Results are memoized.
Integer symplectic_aut_order(const SymplecticPGroup& s);

struct SymplecticBruteForceLimits {
  /// Largest group order |J x J^dual| accepted.
  std::uint64_t max_order = 6561;  // 3^8
  /// Search-tree nodes visited before giving up.
  std::uint64_t max_nodes = 200'000'000;
};

/// Pairing-preserving automorphisms by backtracking over generator images,
/// pruning on the pairing constraints. Throws UnsupportedSize beyond limits.
Integer symplectic_aut_order_bruteforce(const SymplecticPGroup& s, SymplecticBruteForceLimits limits = {});

/// Hall's constant eta(p) = prod_{i>=1} (1 - p^{-i})^{-1}. Not a probability,
/// so value exceeds 1; tail_bound <= tol.
MeasureValue hall_eta(std::uint64_t p, double tol = 1e-12);

/// Cohen-Lenstra probability (#Aut G)^{-1} prod_{i>=1} (1 - p^{-i}).
MeasureValue cl_measure(const AbelianPGroup& g, double tol = 1e-12);

/// Delaunay's measure  #G^{1-r} / #Aut_sympl(G) * prod_{i>=r+1} (1 - p^{1-2i}).
MeasureValue delaunay_measure(const SymplecticPGroup& s, unsigned r, double tol = 1e-12);

/// prod_{p <= cutoff} (1 - p^{-2} + p^{-3}); tail_bound bounds the distance
/// to the full Euler product.
MeasureValue square_cyclic_density(std::uint64_t prime_cutoff);

/// prod_{p <= cutoff} of the Delaunay r = 0 mass of {(Z/p^k)^2 : k >= 0},
/// i.e. prod_{i>=1}(1 - p^{1-2i}) * (1 + p^2 / ((p-1)(p^2-1))).
MeasureValue delaunay_square_cyclic_density(std::uint64_t prime_cutoff, double tol = 1e-12);

/// prod_{i >= first} (1 - base^{-(step*i + offset)}) truncated for accuracy tol.
/// Exposed for tests.
MeasureValue truncated_product(double base, unsigned first, int step, int offset, double tol);

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

}  // namespace altsha
