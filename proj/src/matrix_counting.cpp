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

#include "altsha/matrix_counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "altsha/small_kernels.hpp"

namespace altsha {

std::string to_string(Norm n) { return n == Norm::box ? "box" : "l2"; }

Norm parse_norm(const std::string& name) {
  if (name == "box") return Norm::box;
  if (name == "l2") return Norm::l2;
  throw std::invalid_argument("unknown norm '" + name + "'");
}

std::uint64_t RankHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& kv : counts) t += kv.second;
  return t;
}

std::uint64_t RankHistogram::count(unsigned rank) const {
  auto it = counts.find(rank);
  return it == counts.end() ? 0 : it->second;
}

namespace {

struct Shape {
  std::size_t entries;   // n(n-1)/2
  std::int64_t amax;     // largest admissible |a_ij|
  std::int64_t budget;   // l2: sum a_ij^2 <= budget; box: unused (-1)
  bool empty;            // no matrix at all (l2 with bound <= 0)
};

Shape shape_of(unsigned n, std::int64_t bound, Norm norm) {
  if (n > small::kMaxDim) throw std::invalid_argument("count_alternating_by_rank: n too large");
  Shape s{static_cast<std::size_t>(n) * (n ? n - 1 : 0) / 2, 0, -1, false};
  if (norm == Norm::box) {
    if (bound < 0) throw std::invalid_argument("count_alternating_by_rank: negative box bound");
    s.amax = bound;
    return s;
  }
  if (bound < 0) throw std::invalid_argument("count_alternating_by_rank: negative l2 bound");
  if (bound > 3'000'000'000LL) throw std::invalid_argument("count_alternating_by_rank: l2 bound too large");
  if (bound == 0) {
    s.empty = true;
    return s;
  }
  // 2 sum a^2 < T^2  <=>  sum a^2 <= (T^2 - 1) / 2
  s.budget = (bound * bound - 1) / 2;
  std::int64_t a = static_cast<std::int64_t>(std::sqrt(static_cast<double>(s.budget)));
  while (a * a > s.budget) --a;
  while ((a + 1) * (a + 1) <= s.budget) ++a;
  s.amax = a;
  return s;
}

std::uint64_t sat_pow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
    r *= b;
  }
  return r;
}

std::size_t rank_of(std::span<const std::int64_t> upper, unsigned n) {
  if (auto r = small::alternating_rank(upper, n)) return *r;
  std::vector<Integer> big(upper.size());
  std::transform(upper.begin(), upper.end(), big.begin(), [](std::int64_t v) { return to_integer(v); });
  return rank(AlternatingMatrix(n, std::move(big)));
}

class Enumerator {
 public:
  Enumerator(unsigned n, const Shape& s, std::vector<std::uint64_t>& hist)
      : n_(n), s_(s), upper_(s.entries, 0), hist_(hist) {}

  void run(std::size_t prefix_len, std::int64_t used) { descend(prefix_len, used); }
  std::vector<std::int64_t>& upper() { return upper_; }

 private:
  void descend(std::size_t k, std::int64_t used) {
    if (k == upper_.size()) {
      ++hist_[rank_of(upper_, n_)];
      return;
    }
    std::int64_t lim = s_.amax;
    if (s_.budget >= 0) {
      const std::int64_t room = s_.budget - used;
      while (lim * lim > room) --lim;
    }
    for (std::int64_t a = -lim; a <= lim; ++a) {
      upper_[k] = a;
      descend(k + 1, used + a * a);
    }
    upper_[k] = 0;
  }

  unsigned n_;
  const Shape& s_;
  std::vector<std::int64_t> upper_;
  std::vector<std::uint64_t>& hist_;
};

RankHistogram to_histogram(unsigned n, std::int64_t bound, Norm norm, const std::vector<std::uint64_t>& h) {
  RankHistogram out{n, bound, norm, {}};
  for (unsigned r = 0; r < h.size(); ++r)
    if (h[r]) out.counts[r] = h[r];
  return out;
}

}  // namespace

std::uint64_t enumeration_size(unsigned n, std::int64_t bound, Norm norm) {
  const Shape s = shape_of(n, bound, norm);
  if (s.empty) return 0;
  return sat_pow(static_cast<std::uint64_t>(2 * s.amax + 1), s.entries);
}

RankHistogram count_alternating_by_rank(unsigned n, std::int64_t bound, Norm norm, std::uint64_t cap,
                                        Execution exec) {
  const Shape s = shape_of(n, bound, norm);
  const std::uint64_t size = enumeration_size(n, bound, norm);
  if (size > cap)
    throw std::domain_error("count_alternating_by_rank: " + std::to_string(size) + " matrices exceed cap " +
                            std::to_string(cap));
  if (s.empty) return {n, bound, norm, {}};

  const std::size_t prefix = std::min<std::size_t>(2, s.entries);
  const auto side = static_cast<std::size_t>(2 * s.amax + 1);
  const std::size_t tasks = prefix == 0 ? 1 : (prefix == 1 ? side : side * side);
  auto parts = run_tasks<std::vector<std::uint64_t>>(
      tasks,
      [&](std::size_t t) {
        std::vector<std::uint64_t> hist(n + 1, 0);
        Enumerator e(n, s, hist);
        std::int64_t used = 0;
        std::size_t rest = t;
        for (std::size_t k = 0; k < prefix; ++k) {
          const std::int64_t a = static_cast<std::int64_t>(rest % side) - s.amax;
          rest /= side;
          e.upper()[k] = a;
          used += a * a;
        }
        if (s.budget >= 0 && used > s.budget) return hist;
        e.run(prefix, used);
        return hist;
      },
      exec);
  std::vector<std::uint64_t> total(n + 1, 0);
  for (const auto& p : parts)
    for (unsigned r = 0; r <= n; ++r) total[r] += p[r];
  return to_histogram(n, bound, norm, total);
}

RankHistogram count_alternating_by_rank_serial(unsigned n, std::int64_t bound, Norm norm, std::uint64_t cap) {
  const Shape s = shape_of(n, bound, norm);
  const std::uint64_t size = enumeration_size(n, bound, norm);
  if (size > cap) throw std::domain_error("count_alternating_by_rank_serial: cap exceeded");
  std::vector<std::uint64_t> hist(n + 1, 0);
  if (s.empty) return to_histogram(n, bound, norm, hist);
  std::vector<std::int64_t> a(s.entries, -s.amax);
  const Integer t2 = to_integer(bound) * to_integer(bound);
  for (;;) {
    Integer norm2 = 0;
    std::vector<Integer> big(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      big[i] = to_integer(a[i]);
      norm2 += 2 * big[i] * big[i];
    }
    if (norm == Norm::box || norm2 < t2) ++hist[rank(AlternatingMatrix(n, std::move(big)))];
    std::size_t k = 0;
    while (k < a.size() && a[k] == s.amax) a[k++] = -s.amax;
    if (k == a.size()) break;
    ++a[k];
  }
  return to_histogram(n, bound, norm, hist);
}

CountingFit fit_counting_exponent(unsigned n, unsigned r, const std::vector<std::int64_t>& bounds, Norm norm,
                                  std::uint64_t min_count, std::uint64_t cap, Execution exec) {
  if (bounds.size() < 4) throw std::invalid_argument("fit_counting_exponent: need at least 4 bounds");
  if (r > n) throw std::invalid_argument("fit_counting_exponent: r > n");
  CountingFit out;
  out.n = n;
  out.r = r;
  out.norm = norm;
  const std::size_t entries = static_cast<std::size_t>(n) * (n ? n - 1 : 0) / 2;
  std::vector<std::pair<double, double>> main_pts, frac_pts, main_x, frac_x;
  for (std::int64_t b : bounds) {
    const RankHistogram h = count_alternating_by_rank(n, b, norm, cap, exec);
    std::uint64_t c = 0;
    if (norm == Norm::box) {
      for (const auto& [rk, v] : h.counts)
        if (n - rk >= r) c += v;
    } else {
      c = h.count(r);
    }
    const bool used = c >= min_count && c > 0;
    out.points.push_back({b, c, h.total(), used});
    if (!used) {
      out.skipped.push_back(b);
      continue;
    }
    const double y = static_cast<double>(c);
    if (norm == Norm::box) {
      const double side = static_cast<double>(2 * b + 1);
      const double frac = y / static_cast<double>(h.total());
      main_pts.emplace_back(side, y);
      frac_pts.emplace_back(side, frac);
      if (b > 0) {
        main_x.emplace_back(static_cast<double>(b), y);
        frac_x.emplace_back(static_cast<double>(b), frac);
      }
    } else {
      main_pts.emplace_back(static_cast<double>(b), y);
    }
  }
  if (main_pts.size() < 3)
    throw std::domain_error("fit_counting_exponent: fewer than 3 bounds with count >= " + std::to_string(min_count));
  out.fit = exponent_fit(main_pts);
  if (norm == Norm::box) {
    out.target = n * static_cast<double>(n - r) / 2.0;
    out.fraction_target = out.target - static_cast<double>(entries);
    out.fraction_fit = exponent_fit(frac_pts);
    if (main_x.size() >= 3) {
      out.fit_vs_bound = exponent_fit(main_x);
      out.fraction_fit_vs_bound = exponent_fit(frac_x);
    }
  } else {
    out.target = n * static_cast<double>(r) / 2.0;
  }
  return out;
}

// ---------------------------------------------------------------------------

LatticeBasis::LatticeBasis(std::vector<std::vector<Integer>> v) : vectors(std::move(v)) {
  for (const auto& x : vectors)
    if (x.size() != vectors.front().size()) throw std::invalid_argument("LatticeBasis: vectors of unequal length");
}

LatticeBasis LatticeBasis::from_int(const std::vector<std::vector<std::int64_t>>& v) {
  std::vector<std::vector<Integer>> z;
  z.reserve(v.size());
  for (const auto& row : v) {
    std::vector<Integer> zr(row.size());
    std::transform(row.begin(), row.end(), zr.begin(), [](std::int64_t x) { return to_integer(x); });
    z.push_back(std::move(zr));
  }
  return LatticeBasis(std::move(z));
}

bool LatticeBasis::independent() const { return gram_det(*this) != 0; }

Integer inner_product(const std::vector<Integer>& u, const std::vector<Integer>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("inner_product: length mismatch");
  Integer s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

IntegerMatrix gram_matrix(const LatticeBasis& b) {
  const std::size_t r = b.rank();
  IntegerMatrix g(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) g(i, j) = g(j, i) = inner_product(b.vectors[i], b.vectors[j]);
  return g;
}

Integer gram_det(const LatticeBasis& b) { return b.rank() == 0 ? Integer(1) : determinant(gram_matrix(b)); }

std::vector<AlternatingMatrix> build_R_basis(const LatticeBasis& b) {
  const std::size_t r = b.rank();
  if (r < 2) throw std::invalid_argument("build_R_basis: need r >= 2");
  const std::size_t n = b.dim();
  std::vector<AlternatingMatrix> out;
  out.reserve(r * (r - 1) / 2);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      const auto& li = b.vectors[i];
      const auto& lj = b.vectors[j];
      AlternatingMatrix m(n);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) m.set(k, l, li[k] * lj[l] - lj[k] * li[l]);
      out.push_back(std::move(m));
    }
  return out;
}

Integer frobenius_inner(const AlternatingMatrix& a, const AlternatingMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("frobenius_inner: size mismatch");
  Integer s = 0;
  const auto ua = a.upper();
  const auto ub = b.upper();
  for (std::size_t k = 0; k < ua.size(); ++k) s += ua[k] * ub[k];
  return 2 * s;
}

bool check_inner_product_identity(const LatticeBasis& b) {
  const std::size_t r = b.rank();
  const auto R = build_R_basis(b);
  const IntegerMatrix g = gram_matrix(b);
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) idx.emplace_back(i, j);
  for (std::size_t u = 0; u < idx.size(); ++u)
    for (std::size_t v = 0; v < idx.size(); ++v) {
      const auto [i, j] = idx[u];
      const auto [s, t] = idx[v];
      const Integer rhs = 2 * g(i, s) * g(j, t) - 2 * g(i, t) * g(j, s);
      if (frobenius_inner(R[u], R[v]) != rhs) return false;
    }
  return true;
}

bool check_det_identity(const LatticeBasis& b) {
  const std::size_t r = b.rank();
  if (r < 2) throw std::invalid_argument("check_det_identity: need r >= 2");
  const Integer d = gram_det(b);
  if (d == 0) throw std::domain_error("check_det_identity: dependent basis");
  const auto R = build_R_basis(b);
  IntegerMatrix gr(R.size(), R.size());
  for (std::size_t u = 0; u < R.size(); ++u)
    for (std::size_t v = u; v < R.size(); ++v) gr(u, v) = gr(v, u) = frobenius_inner(R[u], R[v]);
  Integer rhs;
  mpz_ui_pow_ui(rhs.get_mpz_t(), 2, static_cast<unsigned long>(r * (r - 1) / 2));
  Integer dp;
  mpz_pow_ui(dp.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(r - 1));
  return determinant(gr) == rhs * dp;
}

Estimate squarefree_pfaffian_fraction(unsigned n, std::int64_t x, std::uint64_t samples, std::uint64_t seed,
                                      Execution exec) {
  if (n % 2) throw std::invalid_argument("squarefree_pfaffian_fraction: n must be even");
  if (x < 0) throw std::invalid_argument("squarefree_pfaffian_fraction: x must be >= 0");
  if (samples == 0) throw std::invalid_argument("squarefree_pfaffian_fraction: samples must be positive");
  const bool fast = n <= 8 && x <= (1 << 20);
  const Chunking chunks{samples, 4096};
  auto hits = run_tasks<std::uint64_t>(
      chunks.tasks(),
      [&](std::size_t t) {
        Rng rng = task_rng(seed, Stream::squarefree_pfaffian, t);
        std::uniform_int_distribution<std::int64_t> entry(-x, x);
        std::vector<std::int64_t> upper(n * (n ? n - 1 : 0) / 2);
        std::uint64_t h = 0;
        for (std::uint64_t s = 0; s < chunks.size(t); ++s) {
          for (auto& v : upper) v = entry(rng);
          Integer pf;
          if (fast) {
            pf = to_integer(small::pfaffian(upper, n));
          } else {
            std::vector<Integer> big(upper.size());
            std::transform(upper.begin(), upper.end(), big.begin(), [](std::int64_t v) { return to_integer(v); });
            pf = pfaffian(AlternatingMatrix(n, std::move(big)));
          }
          if (is_squarefree(abs(pf))) ++h;
        }
        return h;
      },
      exec);
  return make_estimate(std::accumulate(hits.begin(), hits.end(), std::uint64_t{0}), samples);
}

}  // namespace altsha
