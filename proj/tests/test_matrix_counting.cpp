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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <omp.h>

#include <cmath>

#include "altsha/matrix_counting.hpp"
#include "oracles/oracles.hpp"
#include "test_helpers.hpp"

using namespace altsha;
using altsha::testing::pow_int;

namespace {

LatticeBasis random_basis(std::size_t r, std::size_t n, std::int64_t bound, Rng& rng) {
  std::uniform_int_distribution<std::int64_t> d(-bound, bound);
  std::vector<std::vector<std::int64_t>> v(r, std::vector<std::int64_t>(n));
  for (auto& row : v)
    for (auto& x : row) x = d(rng);
  return LatticeBasis::from_int(v);
}

std::uint64_t pf_zero_count(std::int64_t x) {
  const std::int64_t side = 2 * x + 1;
  std::uint64_t zeros = 0;
  std::vector<std::int64_t> a(6, -x);
  for (;;) {
    if (oracle::pfaffian_expansion(testing::alt_from(4, a)) == 0) ++zeros;
    std::size_t k = 0;
    while (k < 6 && a[k] == x) a[k++] = -x;
    if (k == 6) break;
    ++a[k];
  }
  (void)side;
  return zeros;
}

}  // namespace

TEST_CASE("box histograms, small cases") {
  const RankHistogram h2 = count_alternating_by_rank(2, 1, Norm::box);
  CHECK(h2.counts == std::map<unsigned, std::uint64_t>{{0, 1}, {2, 2}});
  const RankHistogram h3 = count_alternating_by_rank(3, 1, Norm::box);
  CHECK(h3.counts == std::map<unsigned, std::uint64_t>{{0, 1}, {2, 26}});
  const RankHistogram h4 = count_alternating_by_rank(4, 1, Norm::box);
  CHECK(h4.total() == 729);
  CHECK(h4.count(4) == 729 - pf_zero_count(1));
}

TEST_CASE("rank < n exactly when the Pfaffian vanishes") {
  for (std::int64_t x : {1, 2, 3}) {
    const RankHistogram h = count_alternating_by_rank(4, x, Norm::box);
    CHECK(h.total() - h.count(4) == pf_zero_count(x));
  }
}

TEST_CASE("histograms: even ranks, totals, serial reference") {
  for (unsigned n = 0; n <= 5; ++n)
    for (std::int64_t b : {0, 1, 2}) {
      if (n == 5 && b == 2) continue;
      const RankHistogram h = count_alternating_by_rank(n, b, Norm::box);
      for (const auto& [r, c] : h.counts) CHECK(r % 2 == 0);
      CHECK(h.total() == enumeration_size(n, b, Norm::box));
      CHECK(h.counts == count_alternating_by_rank_serial(n, b, Norm::box).counts);
    }
  for (unsigned n = 2; n <= 4; ++n)
    for (std::int64_t t : {1, 2, 3, 5, 7}) {
      const RankHistogram h = count_alternating_by_rank(n, t, Norm::l2);
      CHECK(h.counts == count_alternating_by_rank_serial(n, t, Norm::l2).counts);
      for (const auto& [r, c] : h.counts) CHECK(r % 2 == 0);
    }
  // |A| < 2 admits only the zero matrix and the 2n(n-1)/2 unit matrices (|A|^2 = 2).
  const RankHistogram unit = count_alternating_by_rank(4, 2, Norm::l2);
  CHECK(unit.count(0) == 1);
  CHECK(unit.count(2) == 12);
  CHECK(count_alternating_by_rank(3, 0, Norm::l2).total() == 0);
}

TEST_CASE("enumeration cap") {
  CHECK_THROWS_AS(count_alternating_by_rank(6, 5, Norm::box), std::domain_error);
  CHECK_THROWS_AS(count_alternating_by_rank(4, 10, Norm::box, 1000), std::domain_error);
  CHECK_NOTHROW(count_alternating_by_rank(4, 1, Norm::box, 729));
}

TEST_CASE("histogram does not depend on thread count") {
  omp_set_num_threads(1);
  const auto a = count_alternating_by_rank(5, 1, Norm::box);
  const auto a4 = count_alternating_by_rank(4, 4, Norm::box);
  const auto al2 = count_alternating_by_rank(4, 9, Norm::l2);
  omp_set_num_threads(3);
  CHECK(a.counts == count_alternating_by_rank(5, 1, Norm::box).counts);
  CHECK(a4.counts == count_alternating_by_rank(4, 4, Norm::box).counts);
  CHECK(al2.counts == count_alternating_by_rank(4, 9, Norm::l2).counts);
  CHECK(a.counts == count_alternating_by_rank(5, 1, Norm::box, kCountingCap, Execution::serial).counts);
}

TEST_CASE("counting exponents") {
  std::vector<std::int64_t> ts;
  for (std::int64_t t = 5; t <= 20; ++t) ts.push_back(t);
  const CountingFit l2 = fit_counting_exponent(3, 2, ts, Norm::l2);
  CHECK(l2.target == 3.0);
  CHECK(std::abs(l2.fit.slope - 3.0) <= 0.4);
  CHECK(l2.skipped.empty());

  const CountingFit box = fit_counting_exponent(4, 2, {2, 3, 4, 5, 6, 7, 8}, Norm::box);
  CHECK(box.target == 4.0);
  CHECK(box.fraction_target == -2.0);
  CHECK(std::abs(box.fit.slope - 4.0) <= 0.4);
  REQUIRE(box.fraction_fit.has_value());
  CHECK(std::abs(box.fraction_fit->slope + 2.0) <= 0.3);
  REQUIRE(box.fraction_fit_vs_bound.has_value());
  CHECK(std::abs(box.fraction_fit_vs_bound->slope + 2.0) <= 0.3);
  const std::vector<std::uint64_t> pf0{2313, 8893, 26033, 54213, 117145, 191117, 330465};
  for (std::size_t i = 0; i < pf0.size(); ++i) CHECK(box.points[i].count == pf0[i]);

  const CountingFit n2 = fit_counting_exponent(2, 0, {3, 5, 8, 13}, Norm::l2, 1);
  for (const auto& p : n2.points) CHECK(p.count == 1);
  CHECK(n2.fit.slope == 0.0);

  // Small counts are skipped and reported.
  const CountingFit sk = fit_counting_exponent(3, 2, {2, 3, 4, 10, 12, 14}, Norm::l2);
  CHECK(!sk.skipped.empty());
  CHECK(sk.skipped.front() == 2);
  CHECK_THROWS(fit_counting_exponent(3, 2, {5, 6, 7}, Norm::l2));
  CHECK_THROWS(fit_counting_exponent(2, 0, {3, 5, 8, 13}, Norm::l2));
}

TEST_CASE("gram matrices") {
  const LatticeBasis std2 = LatticeBasis::from_int({{1, 0}, {0, 1}});
  CHECK(gram_matrix(std2) == IntegerMatrix::identity(2));
  CHECK(gram_det(std2) == 1);
  CHECK(gram_det(LatticeBasis::from_int({{2, 0}, {1, 3}})) == 36);
  Rng rng = task_rng(21, Stream::verify, 0);
  for (int i = 0; i < 200; ++i) {
    LatticeBasis b = random_basis(3, 5, 3, rng);
    if (i % 4 == 0) {
      for (std::size_t k = 0; k < 5; ++k) b.vectors[2][k] = b.vectors[0][k] * 2 - b.vectors[1][k];
    }
    const Integer d = gram_det(b);
    CHECK(d >= 0);
    IntegerMatrix m(3, 5);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 5; ++c) m(r, c) = b.vectors[r][c];
    CHECK((d == 0) == (rank(m) < 3));
    CHECK(b.independent() == (d != 0));
  }
  CHECK_THROWS(LatticeBasis::from_int({{1, 2}, {3}}));
}

TEST_CASE("R basis") {
  const LatticeBasis e = LatticeBasis::from_int({{1, 0}, {0, 1}});
  const auto r = build_R_basis(e);
  REQUIRE(r.size() == 1);
  CHECK(r[0].to_full() == testing::mat_from(2, 2, {0, 1, -1, 0}));
  CHECK(frobenius_inner(r[0], r[0]) == 2);
  CHECK_THROWS(build_R_basis(LatticeBasis::from_int({{1, 0}})));
  Rng rng = task_rng(22, Stream::verify, 0);
  for (int i = 0; i < 50; ++i) {
    const LatticeBasis b = random_basis(4, 6, 9, rng);
    const auto rs = build_R_basis(b);
    CHECK(rs.size() == 6);
    for (const auto& m : rs) {
      const IntegerMatrix f = m.to_full();
      for (std::size_t u = 0; u < 6; ++u) {
        CHECK(f(u, u) == 0);
        for (std::size_t v = 0; v < 6; ++v) CHECK(f(u, v) == -f(v, u));
      }
    }
  }
}

TEST_CASE("inner product identity") {
  CHECK(check_inner_product_identity(LatticeBasis::from_int({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
  Rng rng = task_rng(23, Stream::verify, 0);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t r = 2 + i % 3, n = r + i % 3;
    const LatticeBasis b = random_basis(r, n, 20, rng);
    CHECK(check_inner_product_identity(b));
    if (i % 100 == 0) {
      const auto rs = build_R_basis(b);
      const auto& l1 = b.vectors[0];
      const auto& l2 = b.vectors[1];
      const Integer ip = inner_product(l1, l2);
      CHECK(frobenius_inner(rs[0], rs[0]) == 2 * inner_product(l1, l1) * inner_product(l2, l2) - 2 * ip * ip);
    }
  }
}

TEST_CASE("determinant identity") {
  for (std::size_t r = 2; r <= 5; ++r) {
    std::vector<std::vector<std::int64_t>> v(r, std::vector<std::int64_t>(r, 0));
    for (std::size_t i = 0; i < r; ++i) v[i][i] = 1;
    const LatticeBasis b = LatticeBasis::from_int(v);
    CHECK(check_det_identity(b));
    CHECK(gram_det(b) == 1);
  }
  const LatticeBasis b2 = LatticeBasis::from_int({{2, 0}, {1, 3}});
  const auto r = build_R_basis(b2);
  CHECK(frobenius_inner(r[0], r[0]) == 72);
  CHECK(check_det_identity(b2));
  Rng rng = task_rng(24, Stream::verify, 0);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t rk = 2 + checked % 3;
    const std::size_t n = rk + (checked / 3) % (7 - rk);
    const LatticeBasis b = random_basis(rk, n, 10, rng);
    if (gram_det(b) == 0) {
      CHECK_THROWS_AS(check_det_identity(b), std::domain_error);
      continue;
    }
    CHECK(check_det_identity(b));
    ++checked;
  }
  CHECK_THROWS_AS(check_det_identity(LatticeBasis::from_int({{1, 2}, {2, 4}})), std::domain_error);
}

TEST_CASE("squarefree Pfaffian fraction") {
  const Estimate e1 = squarefree_pfaffian_fraction(2, 1, 60000, 5);
  CHECK(std::abs(e1.p_hat - 2.0 / 3) < 3 * std::sqrt(2.0 / 9 / 60000));
  // Squarefree integers in [1, 10]: 1 2 3 5 6 7 10.
  const Estimate e10 = squarefree_pfaffian_fraction(2, 10, 60000, 6);
  const double p10 = 7.0 * 2 / 21;
  CHECK(std::abs(e10.p_hat - p10) < 3 * std::sqrt(p10 * (1 - p10) / 60000));
  const Estimate e4 = squarefree_pfaffian_fraction(4, 5, 4000, 7);
  CHECK(e4.p_hat >= 0.0);
  CHECK(e4.p_hat <= 1.0);
  CHECK(e4.std_error > 0.0);
  CHECK_THROWS(squarefree_pfaffian_fraction(3, 5, 10, 1));
  const Estimate big = squarefree_pfaffian_fraction(10, 3, 500, 8);
  CHECK(big.trials == 500);
}
