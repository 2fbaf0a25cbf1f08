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

#include "altsha/curves.hpp"
#include "altsha/group_measures.hpp"
#include "altsha/matrix_counting.hpp"
#include "altsha/model_sampler.hpp"
#include "test_helpers.hpp"

using namespace altsha;

namespace {

double three_sigma(double p, double n) { return 3 * std::sqrt(p * (1 - p) / n); }

}  // namespace

TEST_CASE("curve height") {
  CHECK(curve_height({0, 1}) == 27);
  CHECK(curve_height({1, 0}) == 4);
  CHECK(curve_height({-2, 3}) == 243);
}

TEST_CASE("curve validity") {
  CHECK_FALSE(is_valid_curve(16, 64));
  CHECK_FALSE(is_valid_curve(-3, 2));
  CHECK(is_valid_curve(0, 1));
  CHECK_FALSE(is_valid_curve(0, 64));
  CHECK(is_valid_curve(0, 32));
  CHECK_FALSE(is_valid_curve(81, 0));
  CHECK(is_valid_curve(27, 0));
  CHECK_FALSE(is_valid_curve(0, 0));
  CHECK_FALSE(is_valid_curve(Integer("617673396283947"), Integer("0")));  // 3^31
  CHECK_FALSE(is_valid_curve(Integer(625) * Integer("1000003"), Integer(15625) * Integer("7")));
  CHECK(is_valid_curve(Integer(625) * Integer("1000003"), Integer(3125) * Integer("7")));
}

TEST_CASE("validity through the arbitrary-precision path") {
  // (a, b) -> (q^2 a, q^3 b) keeps the discriminant's vanishing and, for a
  // prime q with q^2 > |a|, q^3 > |b|, adds no new non-minimal prime.
  const Integer q2 = Integer(1000003) * 1000003, q3 = q2 * 1000003;
  Rng rng = task_rng(1, Stream::verify, 0);
  std::uniform_int_distribution<std::int64_t> d(-3000, 3000);
  for (int i = 0; i < 3000; ++i) {
    std::int64_t a = d(rng), b = d(rng);
    if (i % 4 == 0) {
      a *= 16;
      b *= 64;
    }
    if (i % 50 == 0) {
      a = -3 * (i + 1) * (i + 1);
      b = 2 * (i + 1) * (i + 1) * (i + 1);
    }
    CAPTURE(a);
    CAPTURE(b);
    CHECK(is_valid_curve(q2 * a, q3 * b) == is_valid_curve(a, b));
    if (i % 100 == 0) CHECK_FALSE(is_valid_curve(q2 * q2 * a, q3 * q3 * b));
  }
}

TEST_CASE("exact curve counts") {
  CHECK(count_curves_exact(3) == 0);
  CHECK(count_curves_exact(4) == 2);
  CHECK(count_curves_exact(27) == 8);
  CHECK(count_curves_exact(100) == 14);
  CHECK(count_curves_exact(1000) == 166);
  CHECK(count_curves_exact(10000) == 1048);
  for (std::uint64_t h : {27ULL, 500ULL, 4321ULL, 20000ULL, 123456ULL})
    CHECK(count_curves_exact(h) == count_curves_reference(h));
  CHECK(count_curves_exact(5000, kCurveCountCap, Execution::serial) == count_curves_exact(5000));
  CHECK_THROWS_AS(count_curves_exact(1000, 999), std::domain_error);
  CHECK(curve_count_constant() == doctest::Approx(0.4844620043497548).epsilon(1e-12));
}

TEST_CASE("band sampling") {
  const Integer h("1000000");
  Rng rng = task_rng(2, Stream::curve_sample, 0);
  for (int i = 0; i < 2000; ++i) {
    const CurveParams c = sample_curve_in_band(h, rng);
    CHECK(is_valid_curve(c.a, c.b));
    CHECK(2 * curve_height(c) > h);
    CHECK(curve_height(c) <= h);
  }
  Rng r1 = task_rng(3, Stream::curve_sample, 7), r2 = task_rng(3, Stream::curve_sample, 7);
  CHECK(sample_curve_in_band(Integer("1000000000000000000000000"), r1) ==
        sample_curve_in_band(Integer("1000000000000000000000000"), r2));
  CHECK_THROWS(sample_curve_in_band(Integer(99), r1));
}

TEST_CASE("band acceptance rate matches exact counts") {
  const std::uint64_t h = 1'000'000;
  const SamplingBox box = sampling_box(to_integer(static_cast<std::int64_t>(h)));
  const double box_size = static_cast<double>((2 * box.a_max + 1) * (2 * box.b_max + 1));
  const double p = static_cast<double>(count_curves_exact(h) - count_curves_exact(h / 2)) / box_size;
  // Count accepted pairs over a fixed number of uniform box draws.
  Rng rng = task_rng(4, Stream::curve_sample, 0);
  std::uniform_int_distribution<std::int64_t> da(-box.a_max, box.a_max), db(-box.b_max, box.b_max);
  const int trials = 200000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    const std::int64_t a = da(rng), b = db(rng);
    const Integer ht = curve_height({to_integer(a), to_integer(b)});
    if (2 * ht > Integer(1000000) && ht <= Integer(1000000) && is_valid_curve(a, b)) ++hits;
  }
  CHECK(std::abs(hits / static_cast<double>(trials) - p) < three_sigma(p, trials));
}

TEST_CASE("default schedule") {
  const ModelConfig cfg;
  const ModelParams s = model_schedule(1e12, cfg);
  CHECK(s.eta == 2.0);
  CHECK(s.n_low == 2);
  CHECK(s.x == 4);
  for (double lh = 4; lh <= 30; lh += 0.05) {
    const ModelParams q = model_schedule(std::pow(10.0, lh), cfg);
    const double ratio = std::pow(static_cast<double>(q.x), q.eta) / std::pow(10.0, lh / 12);
    CAPTURE(lh);
    CHECK(ratio >= 1.0 - 1e-9);
    CHECK(ratio <= 16.0);
  }
  const std::vector<std::pair<double, std::pair<double, std::int64_t>>> expected{
      {1e6, {2, 2}}, {1e9, {2, 3}}, {1e12, {2, 4}}, {1e15, {2, 5}}, {1e18, {3, 4}}, {1e21, {3, 4}}, {1e24, {4, 4}}};
  for (const auto& [h, ex] : expected) {
    const ModelParams q = model_schedule(h, cfg);
    CHECK(q.eta == ex.first);
    CHECK(q.x == ex.second);
  }
  ModelConfig bad;
  bad.x_min = 1;
  CHECK_THROWS(bad.validate());
  bad = ModelConfig{};
  bad.calibration_exponent = 0;
  CHECK_THROWS(bad.validate());
  CHECK(parse_eta_schedule("default") == EtaSchedule::log3_floor);
  CHECK_THROWS(parse_eta_schedule("nope"));
}

TEST_CASE("n is uniform on its two values") {
  const ModelConfig cfg;
  Rng rng = task_rng(5, Stream::model_draw, 0);
  const int trials = 100000;
  int low = 0;
  for (int i = 0; i < trials; ++i) {
    const ModelChoice c = model_params(1e12, cfg, rng);
    CHECK((c.n == 2 || c.n == 3));
    if (c.n == 2) ++low;
  }
  CHECK(std::abs(low / static_cast<double>(trials) - 0.5) < three_sigma(0.5, trials));
}

TEST_CASE("model draws: parity and square Sha") {
  const ModelConfig cfg;
  Rng rng = task_rng(6, Stream::model_draw, 0);
  for (double h : {1e6, 1e12, 1e18, 1e24, 1e30}) {
    for (int i = 0; i < 300; ++i) {
      const ModelDraw d = draw_model(h, cfg, rng);
      CHECK(d.rk_prime % 2 == d.n % 2);
      CHECK(is_perfect_square(d.sha_order));
      CHECK(d.rk_prime <= d.n);
    }
  }
}

TEST_CASE("corank probabilities") {
  CHECK(empirical_corank_prob(2, 1, 2, CorankMode::exact, 0, 0).p_hat == doctest::Approx(1.0 / 3));
  CHECK(1 - empirical_corank_prob(2, 1, 1, CorankMode::exact, 0, 0).p_hat == doctest::Approx(2.0 / 3));
  CHECK(empirical_corank_prob(3, 1, 1, CorankMode::exact, 0, 0).p_hat == 1.0);
  const Estimate exact = empirical_corank_prob(4, 2, 2, CorankMode::exact, 0, 0);
  CHECK(exact.hits == 2313);
  CHECK(exact.trials == 15625);
  const Estimate mc = empirical_corank_prob(4, 2, 2, CorankMode::monte_carlo, 100000, 99);
  CHECK(std::abs(mc.p_hat - exact.p_hat) < three_sigma(exact.p_hat, 100000));
  CHECK(mc.std_error == doctest::Approx(std::sqrt(mc.p_hat * (1 - mc.p_hat) / 100000)));
  CHECK_THROWS_AS(empirical_corank_prob(8, 10, 2, CorankMode::exact, 0, 0), std::domain_error);
}

TEST_CASE("exact corank fractions, n = 4, decay like x^{-2}") {
  std::vector<std::pair<double, double>> pts;
  for (std::int64_t x : {2, 4, 6, 8}) pts.emplace_back(static_cast<double>(x), empirical_corank_prob(4, x, 2, CorankMode::exact, 0, 0).p_hat);
  const PowerFit f = exponent_fit(pts);
  CHECK(std::abs(f.slope + 2.0) <= 0.3);
}

TEST_CASE("exponent_fit") {
  const std::vector<std::pair<double, double>> cube{{1, 1}, {10, 1000}, {100, 1e6}};
  CHECK(exponent_fit(cube).slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(exponent_fit(cube).r2 == doctest::Approx(1.0));
  const std::vector<std::pair<double, double>> flat{{1, 5}, {2, 5}, {7, 5}};
  CHECK(exponent_fit(flat).slope == 0.0);
  const std::vector<std::pair<double, double>> bad{{1, 5}, {2, 0}, {7, 5}};
  CHECK_THROWS(exponent_fit(bad));
  const std::vector<std::pair<double, double>> two{{1, 5}, {2, 6}};
  CHECK_THROWS(exponent_fit(two));
  std::vector<std::pair<double, double>> n32;
  for (std::int64_t t = 5; t <= 20; ++t)
    n32.emplace_back(static_cast<double>(t), static_cast<double>(count_alternating_by_rank(3, t, Norm::l2).count(2)));
  CHECK(std::abs(exponent_fit(n32).slope - 3.0) <= 0.4);
}

TEST_CASE("sha distribution: conditioning and doubled labels") {
  for (unsigned r : {0u, 1u}) {
    const ShaDistributionResult res = empirical_sha_distribution(r == 0 ? 6 : 5, 30, r, 3, 600, 7);
    CHECK(res.distribution.total == 600);
    CHECK(res.draws >= 600);
    std::uint64_t sum = 0;
    double freq = 0;
    for (const auto& [label, c] : res.distribution.counts) {
      CHECK(has_doubled_partition(parse_group_label(label)));
      CHECK(parse_group_label(label).prime() == 3);
      sum += c;
      freq += res.distribution.frequency(label);
    }
    CHECK(sum == 600);
    CHECK(freq == doctest::Approx(1.0));
  }
  CHECK_THROWS(empirical_sha_distribution(6, 30, 1, 3, 10, 7));
  CHECK_THROWS(empirical_sha_distribution(6, 30, 2, 3, 10, 7));
  CHECK_THROWS(empirical_sha_distribution(6, 30, 0, 4, 10, 7));
}

TEST_CASE("sha distribution near the Delaunay measure at moderate size") {
  const ShaDistributionResult r0 = empirical_sha_distribution(8, 1000, 0, 3, 3000, 8);
  const double want = delaunay_measure(SymplecticPGroup(AbelianPGroup(3)), 0).value;
  CHECK(std::abs(r0.distribution.frequency("3:[]") - want) < 0.04);
  const ShaDistributionResult r1 = empirical_sha_distribution(7, 1000, 1, 2, 3000, 8);
  const double want1 = delaunay_measure(SymplecticPGroup(AbelianPGroup(2)), 1).value;
  CHECK(std::abs(r1.distribution.frequency("2:[]") - want1) < 0.04);
}

TEST_CASE("p-adic Smith exponents") {
  // diag(1, 2, 4, 8) over Z_2 at precision 5.
  std::vector<std::uint64_t> d(16, 0);
  d[0] = 1;
  d[5] = 2;
  d[10] = 4;
  d[15] = 8;
  CHECK(padic_smith_exponents(d, 4, 2, 5) == std::vector<unsigned>{3, 2, 1});
  d[15] = 32;  // zero mod 2^5: undetermined
  CHECK(padic_smith_exponents(d, 4, 2, 5) == std::vector<unsigned>{5, 2, 1});
  // Agrees with the integer Smith form on random small matrices.
  Rng rng = task_rng(9, Stream::verify, 0);
  std::uniform_int_distribution<std::uint64_t> e(0, 242);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::uint64_t> m(9);
    for (auto& v : m) v = e(rng);
    std::vector<Integer> z(m.begin(), m.end());
    const auto divs = smith_divisors(IntegerMatrix(3, 3, z));
    std::vector<unsigned> want;
    for (const auto& dv : divs) {
      const unsigned v = dv == 0 ? 40 : valuation(dv, 3);
      if (v) want.push_back(std::min(v, 40u));
    }
    std::sort(want.begin(), want.end(), std::greater<>());
    const auto got = padic_smith_exponents(m, 3, 3, 20);
    std::vector<unsigned> capped;
    for (unsigned v : want) capped.push_back(std::min(v, 20u));
    CHECK(got == capped);
  }
}

TEST_CASE("Cohen-Lenstra distribution at moderate size") {
  const ClDistributionResult res = empirical_cl_distribution(6, 3, 6, 20000, 10);
  CHECK(res.distribution.total == 20000);
  const double triv = cl_measure(AbelianPGroup(3)).value;
  const double z3 = cl_measure(AbelianPGroup(3, {1})).value;
  CHECK(std::abs(res.distribution.frequency("3:[]") - triv) < 0.02);
  CHECK(std::abs(res.distribution.frequency("3:[1]") - z3) < 0.02);
  double f = 0;
  for (const auto& [label, c] : res.distribution.counts) f += res.distribution.frequency(label);
  CHECK(f == doctest::Approx(1.0));
  CHECK_THROWS(empirical_cl_distribution(6, 3, 4, 10, 1));
}

TEST_CASE("square-of-cyclic fraction is a valid estimate") {
  const Estimate e = empirical_square_cyclic_fraction(6, 200, 2000, 11);
  CHECK(e.trials == 2000);
  CHECK(e.p_hat >= 0.0);
  CHECK(e.p_hat <= 1.0);
  const double limit = delaunay_square_cyclic_density(100000).value;
  CHECK(std::abs(e.p_hat - limit) < 4 * e.std_error + 0.01);
}

TEST_CASE("results do not depend on thread count or execution mode") {
  const ModelConfig cfg;
  const std::vector<Integer> grid{Integer("1000000"), Integer("1000000000000"), Integer("1000000000000000000")};
  omp_set_num_threads(1);
  const SurveyResult a = rank_survey(grid, 5000, cfg);
  const auto sha_a = empirical_sha_distribution(6, 50, 0, 2, 1000, 3);
  const auto cl_a = empirical_cl_distribution(5, 2, 6, 9000, 3);
  const auto mc_a = empirical_corank_prob(6, 3, 2, CorankMode::monte_carlo, 10000, 3);
  omp_set_num_threads(4);
  const SurveyResult b = rank_survey(grid, 5000, cfg);
  const auto sha_b = empirical_sha_distribution(6, 50, 0, 2, 1000, 3);
  const auto cl_b = empirical_cl_distribution(5, 2, 6, 9000, 3, Execution::serial);
  const auto mc_b = empirical_corank_prob(6, 3, 2, CorankMode::monte_carlo, 10000, 3);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].hits == b.records[i].hits);
  CHECK(sha_a.distribution.counts == sha_b.distribution.counts);
  CHECK(cl_a.distribution.counts == cl_b.distribution.counts);
  CHECK(mc_a.hits == mc_b.hits);
}

TEST_CASE("rank survey shape") {
  const ModelConfig cfg;
  const std::vector<Integer> grid{Integer("1000000"), Integer("1000000000000"), Integer("1000000000000000000")};
  const SurveyResult s = rank_survey(grid, 4000, cfg);
  CHECK(s.records.size() == 15);
  for (const auto& r : s.records) {
    CHECK(r.hits <= r.samples);
    CHECK(r.p_hat == doctest::Approx(static_cast<double>(r.hits) / static_cast<double>(r.samples)));
    CHECK(r.std_error == doctest::Approx(std::sqrt(r.p_hat * (1 - r.p_hat) / static_cast<double>(r.samples))));
    CHECK(2 * r.h_lo <= r.h_hi);
  }
  CHECK(s.fits.count(1) == 1);
  CHECK_THROWS(rank_survey({grid[0], grid[1]}, 10, cfg));
  CHECK_THROWS(rank_survey({grid[1], grid[0], grid[2]}, 10, cfg));
}

TEST_CASE("Prob(rk' >= 1) approaches one half at large height") {
  // At H = 10^30 the default schedule gives eta = 5, x = 4, n in {5, 6}.
  const ModelConfig cfg;
  Rng rng = task_rng(12, Stream::model_draw, 0);
  const int trials = 200000;
  int hits = 0;
  for (int i = 0; i < trials; ++i)
    if (draw_model_corank(1e30, cfg, rng) >= 1) ++hits;
  CHECK(std::abs(hits / static_cast<double>(trials) - 0.5) < 0.01);
}

TEST_CASE("predicted table") {
  const std::vector<double> hs{1e10, 1e15};
  const auto rows = predicted_table(hs);
  CHECK(std::abs(rows[0].rank0 - 30.8) < 0.1);
  CHECK(std::abs(rows[0].rank1 - 42.7) < 0.1);
  CHECK(std::abs(rows[0].rank_ge2 - 19.2) < 0.1);
  CHECK(std::abs(rows[0].rank_ge3 - 7.3) < 0.1);
  CHECK(std::abs(rows[1].rank0 - 38.1) < 0.1);
  CHECK(std::abs(rows[1].rank1 - 47.2) < 0.1);
  CHECK(std::abs(rows[1].rank_ge2 - 11.9) < 0.1);
  CHECK(std::abs(rows[1].rank_ge3 - 2.8) < 0.1);
  for (const auto& r : predicted_table(std::vector<double>{1e3, 1e8, 1e20, 1e40})) {
    CHECK(r.rank0 + r.rank_ge2 == doctest::Approx(50.0));
    CHECK(r.rank1 + r.rank_ge3 == doctest::Approx(50.0));
  }
}
