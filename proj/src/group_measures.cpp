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

#include "altsha/group_measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace altsha {

namespace {

Integer ipow(std::uint64_t p, unsigned e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), e);
  return out;
}

std::uint64_t upow(std::uint64_t p, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= p;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Automorphism orders

Integer aut_order(const AbelianPGroup& g) {
  const std::uint64_t p = g.prime();
  // Ascending exponents e_1 <= ... <= e_n.
  std::vector<unsigned> e(g.exponents().rbegin(), g.exponents().rend());
  const std::size_t n = e.size();
  Integer out = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t d = k, c = k;  // 0-based max/min index with the same exponent
    while (d + 1 < n && e[d + 1] == e[k]) ++d;
    while (c > 0 && e[c - 1] == e[k]) --c;
    const unsigned dk = static_cast<unsigned>(d + 1), ck = static_cast<unsigned>(c + 1);
    out *= ipow(p, dk) - ipow(p, static_cast<unsigned>(k));
    out *= ipow(p, e[k] * static_cast<unsigned>(n - dk));
    out *= ipow(p, (e[k] - 1) * static_cast<unsigned>(n - ck + 1));
  }
  return out;
}

namespace {

/// Coordinates of group elements: component k lives in Z/p^{mod_exp[k]}.
struct CyclicSum {
  std::uint64_t p;
  std::vector<unsigned> mod_exp;
  std::vector<std::uint64_t> modulus;

  CyclicSum(std::uint64_t prime, std::vector<unsigned> exps) : p(prime), mod_exp(std::move(exps)) {
    for (unsigned m : mod_exp) modulus.push_back(upow(p, m));
  }

  std::size_t dim() const { return mod_exp.size(); }

  /// Elements killed by p^order_exp.
  std::vector<std::vector<std::uint64_t>> candidates(unsigned order_exp) const {
    std::vector<std::uint64_t> step(dim()), count(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
      const unsigned shift = mod_exp[k] > order_exp ? mod_exp[k] - order_exp : 0;
      step[k] = upow(p, shift);
      count[k] = modulus[k] / step[k];
    }
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> idx(dim(), 0);
    for (;;) {
      std::vector<std::uint64_t> x(dim());
      for (std::size_t k = 0; k < dim(); ++k) x[k] = idx[k] * step[k];
      out.push_back(std::move(x));
      std::size_t k = 0;
      while (k < dim() && ++idx[k] == count[k]) idx[k++] = 0;
      if (k == dim()) break;
    }
    return out;
  }

  /// Given generator images, decide injectivity: the images of the socle
  /// generators p^{e_i - 1} g_i must be F_p-independent in G[p].
  bool injective(const std::vector<const std::vector<std::uint64_t>*>& images) const {
    const std::size_t m = dim();
    std::vector<std::vector<std::uint64_t>> rows(m, std::vector<std::uint64_t>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t scale = upow(p, mod_exp[i] - 1);
      for (std::size_t k = 0; k < m; ++k) {
        const std::uint64_t v = ((*images[i])[k] * scale) % modulus[k];
        // v lies in p^{mod_exp[k]-1} Z / p^{mod_exp[k]}; read off its F_p digit.
        rows[i][k] = v / upow(p, mod_exp[k] - 1);
      }
    }
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < m; ++c) {
      std::size_t piv = r;
      while (piv < m && rows[piv][c] % p == 0) ++piv;
      if (piv == m) continue;
      std::swap(rows[piv], rows[r]);
      std::uint64_t inv = 1;
      while ((rows[r][c] * inv) % p != 1) ++inv;
      for (std::size_t i = r + 1; i < m; ++i) {
        const std::uint64_t f = (rows[i][c] * inv) % p;
        if (!f) continue;
        for (std::size_t j = c; j < m; ++j) rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
      }
      ++r;
    }
    return r == m;
  }
};

}  // namespace

Integer aut_order_bruteforce(const AbelianPGroup& g, std::uint64_t max_endomorphisms) {
  std::vector<unsigned> exps(g.exponents().begin(), g.exponents().end());
  if (exps.empty()) return 1;
  const std::uint64_t p = g.prime();
  CyclicSum grp(p, exps);
  const std::size_t m = exps.size();
  long double total = 1;
  // For each generator, the F_p coordinates of p^{e_i - 1} times every admissible image.
  std::vector<std::vector<std::vector<std::uint64_t>>> socle(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto cand = grp.candidates(exps[i]);
    total *= static_cast<long double>(cand.size());
    const std::uint64_t scale = upow(p, exps[i] - 1);
    for (const auto& x : cand) {
      std::vector<std::uint64_t> row(m);
      for (std::size_t k = 0; k < m; ++k) row[k] = (x[k] * scale % grp.modulus[k]) / upow(p, exps[k] - 1);
      socle[i].push_back(std::move(row));
    }
  }
  if (total > static_cast<long double>(max_endomorphisms))
    throw UnsupportedSize("aut_order_bruteforce: " + g.label() + " has too many endomorphisms");

  // Depth-first over generator images, keeping the socle images reduced to
  // echelon form so that a dependent choice is rejected at once.
  std::vector<std::uint64_t> inv(p, 0);
  for (std::uint64_t a = 1; a < p; ++a)
    for (std::uint64_t b = 1; b < p; ++b)
      if (a * b % p == 1) inv[a] = b;
  std::vector<std::vector<std::uint64_t>> basis;
  std::vector<std::size_t> pivots;
  std::uint64_t count = 0;
  auto reduce = [&](std::vector<std::uint64_t> v) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const std::uint64_t f = v[pivots[b]];
      if (!f) continue;
      for (std::size_t k = 0; k < m; ++k) v[k] = (v[k] + (p - f) * basis[b][k]) % p;
    }
    return v;
  };
  auto descend = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      ++count;
      return;
    }
    for (const auto& row : socle[i]) {
      std::vector<std::uint64_t> v = reduce(row);
      std::size_t piv = 0;
      while (piv < m && v[piv] == 0) ++piv;
      if (piv == m) continue;
      const std::uint64_t s = inv[v[piv]];
      for (auto& x : v) x = x * s % p;
      basis.push_back(std::move(v));
      pivots.push_back(piv);
      self(self, i + 1);
      basis.pop_back();
      pivots.pop_back();
    }
  };
  descend(descend, 0);
  Integer out;
  mpz_set_ui(out.get_mpz_t(), static_cast<unsigned long>(count));
  return out;
}

Integer symplectic_aut_order(const SymplecticPGroup& s) {
  static std::shared_mutex mutex;
  static std::map<std::string, Integer> memo;
  const std::string key = s.label();
  {
    std::shared_lock lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const std::uint64_t p = s.prime();
  std::vector<unsigned> half(s.half().exponents().begin(), s.half().exponents().end());
  Integer out = 1;
  while (!half.empty()) {
    const AbelianPGroup g = SymplecticPGroup(AbelianPGroup(p, half)).underlying();
    const unsigned l = half.front();
    const Integer order = g.order();
    const Integer x_choices = order - ipow(p, g.log_torsion_size(l - 1));
    const Integer y_choices = order / ipow(p, l);
    out *= x_choices * y_choices;
    half.erase(half.begin());
  }
  std::unique_lock lock(mutex);
  memo.emplace(key, out);
  return out;
}

Integer symplectic_aut_order_bruteforce(const SymplecticPGroup& s, SymplecticBruteForceLimits limits) {
  const std::uint64_t p = s.prime();
  std::vector<unsigned> half(s.half().exponents().begin(), s.half().exponents().end());
  if (half.empty()) return 1;
  if (s.underlying().order() > Integer(std::to_string(limits.max_order)))
    throw UnsupportedSize("symplectic_aut_order_bruteforce: " + s.label() + " exceeds the order cap");

  // Generators in order x_1, y_1, x_2, y_2, ...; coordinates in the same order.
  const std::size_t m = half.size();
  std::vector<unsigned> mod_exp;
  for (unsigned l : half) {
    mod_exp.push_back(l);
    mod_exp.push_back(l);
  }
  CyclicSum grp(p, mod_exp);
  const unsigned top = half.front();
  const std::uint64_t pair_mod = upow(p, top);

  // <u, v> as an element of Z/p^top, i.e. 1/p^l maps to p^{top-l}.
  auto pairing = [&](const std::vector<std::uint64_t>& u, const std::vector<std::uint64_t>& v) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t scale = upow(p, top - half[i]);
      const std::uint64_t mod_i = grp.modulus[2 * i];
      const std::uint64_t t = (u[2 * i] * v[2 * i + 1] % mod_i + mod_i - u[2 * i + 1] * v[2 * i] % mod_i) % mod_i;
      acc = (acc + t * scale) % pair_mod;
    }
    return acc;
  };

  std::vector<std::vector<std::uint64_t>> gens(2 * m, std::vector<std::uint64_t>(2 * m, 0));
  for (std::size_t k = 0; k < 2 * m; ++k) gens[k][k] = 1;
  std::vector<std::vector<std::uint64_t>> target(2 * m, std::vector<std::uint64_t>(2 * m));
  for (std::size_t a = 0; a < 2 * m; ++a)
    for (std::size_t b = 0; b < 2 * m; ++b) target[a][b] = pairing(gens[a], gens[b]);

  std::vector<std::vector<std::vector<std::uint64_t>>> cand;
  for (std::size_t k = 0; k < 2 * m; ++k) cand.push_back(grp.candidates(mod_exp[k]));

  std::vector<const std::vector<std::uint64_t>*> images(2 * m, nullptr);
  std::uint64_t nodes = 0, count = 0;
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == 2 * m) {
      if (grp.injective(images)) ++count;
      return;
    }
    for (const auto& c : cand[depth]) {
      if (++nodes > limits.max_nodes)
        throw UnsupportedSize("symplectic_aut_order_bruteforce: node budget exhausted for " + s.label());
      bool ok = true;
      for (std::size_t e = 0; e < depth && ok; ++e) ok = pairing(c, *images[e]) == target[depth][e];
      if (!ok) continue;
      images[depth] = &c;
      self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
  Integer out;
  mpz_set_ui(out.get_mpz_t(), static_cast<unsigned long>(count));
  return out;
}

// ---------------------------------------------------------------------------
// Truncated products

MeasureValue truncated_product(double base, unsigned first, int step, int offset, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("truncated_product: tol must be positive");
  if (base <= 1.0 || step <= 0) throw std::invalid_argument("truncated_product: need base > 1, step > 0");
  const long double ratio = std::pow(static_cast<long double>(base), -step);
  long double value = 1.0L;
  for (unsigned i = first;; ++i) {
    const long double q = std::pow(static_cast<long double>(base), -(step * static_cast<int>(i) + offset));
    // Remaining terms q, q*ratio, ... sum to at most q / (1 - ratio), and
    // prod (1 - q_j) >= 1 - sum q_j.
    const long double tail = q / (1.0L - ratio);
    if (q < tol / 10 && value * tail <= tol) return {static_cast<double>(value), static_cast<double>(value * tail)};
    value *= 1.0L - q;
  }
}

MeasureValue hall_eta(std::uint64_t p, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("hall_eta: tol must be positive");
  // Tighten the product so that the reciprocal meets tol.
  const MeasureValue prod = truncated_product(static_cast<double>(p), 1, 1, 0, tol / 16);
  const long double s = prod.tail_bound / prod.value;  // bound on 1 - remainder
  const long double eta = 1.0L / prod.value;
  return {static_cast<double>(eta), static_cast<double>(eta * s / (1.0L - s))};
}

MeasureValue cl_measure(const AbelianPGroup& g, double tol) {
  const MeasureValue prod = truncated_product(static_cast<double>(g.prime()), 1, 1, 0, tol);
  const double aut = aut_order(g).get_d();
  return {prod.value / aut, prod.tail_bound / aut};
}

MeasureValue delaunay_measure(const SymplecticPGroup& s, unsigned r, double tol) {
  const MeasureValue prod = truncated_product(static_cast<double>(s.prime()), r + 1, 2, -1, tol);
  // #G^{1-r} / #Aut as an exact rational first.
  const Integer order = s.underlying().order();
  mpq_class weight(1, 1);
  if (r == 0)
    weight = mpq_class(order);
  else
    for (unsigned k = 1; k < r; ++k) weight /= order;
  weight /= symplectic_aut_order(s);
  const double w = weight.get_d();
  return {w * prod.value, w * prod.tail_bound};
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

MeasureValue square_cyclic_density(std::uint64_t prime_cutoff) {
  if (prime_cutoff < 2) throw std::invalid_argument("square_cyclic_density: cutoff must be >= 2");
  long double value = 1.0L;
  for (std::uint64_t p : primes_up_to(prime_cutoff)) {
    const long double q = 1.0L / static_cast<long double>(p);
    value *= 1.0L - q * q + q * q * q;
  }
  // Omitted factors lie in (1 - p^{-2}, 1) and sum_{p > c} p^{-2} < 1/c.
  return {static_cast<double>(value), static_cast<double>(value / static_cast<long double>(prime_cutoff))};
}

MeasureValue delaunay_square_cyclic_density(std::uint64_t prime_cutoff, double tol) {
  if (prime_cutoff < 2) throw std::invalid_argument("delaunay_square_cyclic_density: cutoff must be >= 2");
  long double value = 1.0L, err = 0.0L;
  for (std::uint64_t p : primes_up_to(prime_cutoff)) {
    const long double q = static_cast<long double>(p);
    const MeasureValue c = truncated_product(static_cast<double>(p), 1, 2, -1, tol);
    const long double f = 1.0L + q * q / ((q - 1) * (q * q - 1));
    value *= c.value * f;
    err += c.tail_bound * f;
  }
  // Each omitted factor exceeds 1 - 2 p^{-6}.
  const long double c = static_cast<long double>(prime_cutoff);
  err += 1.0L / (c * c * c * c * c);
  return {static_cast<double>(value), static_cast<double>(err)};
}

}  // namespace altsha
