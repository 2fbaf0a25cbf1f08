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

#include <thread>

#include "altsha/group_measures.hpp"
#include "test_helpers.hpp"

using namespace altsha;
using altsha::testing::pow_int;

namespace {

constexpr double kProd2 = 0.2887880950866024;  // prod_{i>=1} (1 - 2^{-i})

}  // namespace

TEST_CASE("group labels") {
  CHECK(AbelianPGroup(2).label() == "2:[]");
  CHECK(AbelianPGroup(2, {2, 1}).label() == "2:[2,1]");
  CHECK(AbelianPGroup(2, {1, 2}) == AbelianPGroup(2, {2, 1}));
  CHECK(group_label(AbelianPGroup(3, {1, 0, 3})) == group_label(AbelianPGroup(3, {3, 1})));
  CHECK(parse_group_label("5:[3,1,1]") == AbelianPGroup(5, {3, 1, 1}));
  CHECK(parse_group_label("2:[]").trivial());
  CHECK_THROWS(AbelianPGroup(4, {1}));
  CHECK(SymplecticPGroup(AbelianPGroup(2, {2, 1})).label() == "2:[2,2,1,1]");
  CHECK_THROWS(SymplecticPGroup::from_underlying(AbelianPGroup(2, {2, 1})));
  for (const auto& g : abelian_groups_up_to(3, 5)) CHECK(parse_group_label(g.label()) == g);
}

TEST_CASE("aut_order examples") {
  CHECK(aut_order(AbelianPGroup(2)) == 1);
  CHECK(aut_order(AbelianPGroup(2, {3})) == 4);
  CHECK(aut_order(AbelianPGroup(7, {2})) == 42);
  CHECK(aut_order(AbelianPGroup(2, {1, 1})) == 6);
  CHECK(aut_order(AbelianPGroup(2, {1, 1, 1})) == 168);
}

TEST_CASE("aut_order agrees with endomorphism enumeration up to p^4") {
  for (std::uint64_t p : {2, 3}) {
    for (const auto& g : abelian_groups_up_to(p, 4)) {
      CAPTURE(g.label());
      CHECK(aut_order(g) == aut_order_bruteforce(g));
    }
  }
  CHECK_THROWS_AS(aut_order_bruteforce(AbelianPGroup(3, {1, 1, 1, 1, 1}), 1000), UnsupportedSize);
}

TEST_CASE("symplectic aut order") {
  CHECK(symplectic_aut_order(SymplecticPGroup(AbelianPGroup(2))) == 1);
  CHECK(symplectic_aut_order(SymplecticPGroup(AbelianPGroup(2, {1}))) == 6);
  CHECK(symplectic_aut_order(SymplecticPGroup(AbelianPGroup(3, {1}))) == 24);
  // Sp_4(F_2) has order 720, Sp_4(F_3) order 51840.
  CHECK(symplectic_aut_order(SymplecticPGroup(AbelianPGroup(2, {1, 1}))) == 720);
  CHECK(symplectic_aut_order(SymplecticPGroup(AbelianPGroup(3, {1, 1}))) == 51840);
  // Z/p^k x Z/p^k with the standard pairing: SL_2(Z/p^k), order p^{3k} (1 - p^{-2}).
  CHECK(symplectic_aut_order(SymplecticPGroup(AbelianPGroup(2, {3}))) == 384);
  CHECK(symplectic_aut_order(SymplecticPGroup(AbelianPGroup(5, {2}))) == 15000);
}

TEST_CASE("symplectic aut recursion agrees with backtracking search") {
  for (std::uint64_t p : {2, 3}) {
    for (const auto& s : symplectic_groups_up_to(p, 4)) {
      CAPTURE(s.label());
      CHECK(symplectic_aut_order(s) == symplectic_aut_order_bruteforce(s));
    }
  }
  for (const auto& half : {AbelianPGroup(2, {2, 1}), AbelianPGroup(2, {3}), AbelianPGroup(5, {1})}) {
    const SymplecticPGroup s(half);
    CAPTURE(s.label());
    CHECK(symplectic_aut_order(s) == symplectic_aut_order_bruteforce(s));
  }
  SymplecticBruteForceLimits tiny{16, 1000};
  CHECK_THROWS_AS(symplectic_aut_order_bruteforce(SymplecticPGroup(AbelianPGroup(3, {2})), tiny), UnsupportedSize);
}

TEST_CASE("symplectic aut memo table is safe under concurrent use") {
  const auto groups = symplectic_groups_up_to(5, 12);
  std::vector<Integer> expected;
  for (const auto& s : groups) expected.push_back(symplectic_aut_order(s));
  std::vector<std::thread> threads;
  std::vector<int> ok(4, 1);
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&, t] {
      for (std::size_t i = 0; i < groups.size(); ++i)
        if (symplectic_aut_order(groups[(i + t) % groups.size()]) != expected[(i + t) % groups.size()]) ok[t] = 0;
    });
  for (auto& th : threads) th.join();
  for (int v : ok) CHECK(v == 1);
}

TEST_CASE("hall_eta") {
  const MeasureValue e2 = hall_eta(2, 1e-12);
  CHECK(e2.value == doctest::Approx(3.462746619455064).epsilon(1e-12));
  CHECK(e2.tail_bound <= 1e-12);
  const MeasureValue big = hall_eta(1'000'003, 1e-12);
  CHECK(std::abs(big.value - 1.0) < 2e-6);
  double prev = 1e9;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 101, 1009}) {
    const double v = hall_eta(p).value;
    CHECK(v < prev);
    CHECK(v > 1.0);
    prev = v;
  }
}

TEST_CASE("cl_measure") {
  const MeasureValue t = cl_measure(AbelianPGroup(2));
  CHECK(t.value == doctest::Approx(kProd2).epsilon(1e-12));
  for (std::uint64_t p : {3, 5, 7}) {
    const double triv = cl_measure(AbelianPGroup(p)).value;
    CHECK(cl_measure(AbelianPGroup(p, {1})).value == doctest::Approx(triv / static_cast<double>(p - 1)).epsilon(1e-12));
  }
  for (std::uint64_t p : {2, 3}) {
    double sum4 = 0, sum6 = 0, sum10 = 0;
    for (const auto& g : abelian_groups_up_to(p, 10)) {
      const MeasureValue m = cl_measure(g);
      CHECK(m.value - m.tail_bound >= -1e-12);
      CHECK(m.value + m.tail_bound <= 1 + 1e-12);
      if (g.log_order() <= 4) sum4 += m.value;
      if (g.log_order() <= 6) sum6 += m.value;
      sum10 += m.value;
    }
    CHECK(sum4 < 1.0);
    CHECK(sum4 < sum6);
    CHECK(sum6 < sum10);
    CHECK(sum10 < 1.0);
    CHECK(sum10 > 1.0 - 2.0 * std::pow(static_cast<double>(p), -10));
  }
}

TEST_CASE("delaunay_measure") {
  const SymplecticPGroup triv(AbelianPGroup(2));
  CHECK(delaunay_measure(triv, 0).value == doctest::Approx(0.4194224417951076).epsilon(1e-12));
  CHECK(delaunay_measure(triv, 1).value == doctest::Approx(0.8388448835902152).epsilon(1e-12));
  const SymplecticPGroup hyp(AbelianPGroup(2, {1}));
  CHECK(delaunay_measure(hyp, 1).value == doctest::Approx(0.8388448835902152 / 6).epsilon(1e-12));
  CHECK(delaunay_measure(hyp, 0).value == doctest::Approx(4 * 0.4194224417951076 / 6).epsilon(1e-12));
  for (unsigned r : {0u, 1u}) {
    for (std::uint64_t p : {2, 3, 5}) {
      double sum6 = 0, sum_big = 0;
      for (const auto& s : symplectic_groups_up_to(p, 20)) {
        const double v = delaunay_measure(s, r).value;
        if (s.log_order() <= 6) sum6 += v;
        sum_big += v;
      }
      CAPTURE(p);
      CAPTURE(r);
      CHECK(sum6 <= 1.0);
      CHECK(sum6 < sum_big);
      CHECK(sum_big <= 1.0 + 1e-12);
      CHECK(sum_big > 1.0 - (r == 0 ? 3e-3 : 1e-5));
    }
  }
}

TEST_CASE("truncated products respect the tolerance") {
  for (double tol : {1e-6, 1e-9, 1e-12}) {
    const MeasureValue m = truncated_product(2.0, 1, 1, 0, tol);
    CHECK(m.tail_bound <= tol);
    CHECK(std::abs(m.value - kProd2) <= tol);
  }
}

TEST_CASE("square_cyclic_density") {
  CHECK(square_cyclic_density(2).value == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(square_cyclic_density(3).value == doctest::Approx(0.8101851851851851).epsilon(1e-14));
  const MeasureValue m = square_cyclic_density(100'000);
  CHECK(m.value == doctest::Approx(0.7485358601911617).epsilon(1e-12));
  CHECK(std::abs(m.value - 0.748535264) <= m.tail_bound + 1e-9);
  CHECK(primes_up_to(30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}

TEST_CASE("delaunay_square_cyclic_density sums the r = 0 measure over cyclic squares") {
  long double oracle = 1.0L;
  for (std::uint64_t p : {2, 3, 5}) {
    long double local = delaunay_measure(SymplecticPGroup(AbelianPGroup(p)), 0).value;
    for (unsigned k = 1; k <= 60; ++k) local += delaunay_measure(SymplecticPGroup(AbelianPGroup(p, {k})), 0).value;
    oracle *= local;
  }
  CHECK(delaunay_square_cyclic_density(2).value == doctest::Approx(0.9786523641886).epsilon(1e-10));
  CHECK(delaunay_square_cyclic_density(5).value == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
  const MeasureValue full = delaunay_square_cyclic_density(100'000);
  CHECK(full.tail_bound < 1e-9);
  CHECK(full.value > square_cyclic_density(100'000).value + 0.2);
}
