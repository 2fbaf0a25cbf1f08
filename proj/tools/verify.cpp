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

#include "verify.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "altsha/calibration.hpp"
#include "altsha/curves.hpp"
#include "altsha/exact_linalg.hpp"
#include "altsha/matrix_counting.hpp"
#include "altsha/model_sampler.hpp"
#include "altsha/parallel.hpp"
#include "altsha/report.hpp"
#include "oracles/oracles.hpp"
#include "test_helpers.hpp"

namespace altsha::verify {

using testing::random_alt;
using testing::random_matrix;

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return !checks.empty();
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["passed"] = passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    j["checks"].push_back(
        {{"name", c.name}, {"trials", c.trials}, {"failures", c.failures}, {"passed", c.passed()}, {"detail", c.detail}});
  return j;
}

std::string Report::to_text() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.passed() ? "PASS " : "FAIL ") << suite << '/' << c.name << " (" << c.failures << '/' << c.trials
        << " failed)";
    if (!c.detail.empty()) out << ' ' << c.detail;
    out << '\n';
  }
  return out.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lattice", "snf", "table", "period"};
  return names;
}

Report run_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "lattice") return lattice_suite(seed);
  if (suite == "snf") return snf_suite(seed);
  if (suite == "table") return table_suite();
  if (suite == "period") return period_suite(seed);
  throw std::invalid_argument("unknown verify suite '" + suite + "' (expected lattice, snf, table or period)");
}

namespace {

void fail(Check& c, const std::string& what) {
  if (c.failures++ == 0) c.detail = what;
}

// Merges per-task checks in task order.
void absorb(Check& into, const Check& part) {
  into.trials += part.trials;
  if (part.failures && into.failures == 0) into.detail = part.detail;
  into.failures += part.failures;
}

LatticeBasis random_basis(Rng& rng) {
  std::uniform_int_distribution<int> rank_d(2, 4), extra_d(0, 2);
  std::uniform_int_distribution<std::int64_t> entry(-5, 5);
  for (;;) {
    const int r = rank_d(rng);
    const int n = r + extra_d(rng);
    std::vector<std::vector<std::int64_t>> v(r, std::vector<std::int64_t>(n));
    for (auto& row : v)
      for (auto& e : row) e = entry(rng);
    LatticeBasis b = LatticeBasis::from_int(v);
    if (b.independent()) return b;
  }
}

// Every square matrix of size n with entries in [-2, 2], split by first entry.
Check exhaustive_square(unsigned n) {
  const std::size_t cells = n * n;
  std::uint64_t per_task = 1;
  for (std::size_t i = 1; i < cells; ++i) per_task *= 5;
  auto parts = run_tasks<Check>(5, [&](std::size_t t) {
    Check c;
    std::vector<std::int64_t> digits(cells, 0);
    digits[0] = static_cast<std::int64_t>(t);
    for (std::uint64_t k = 0; k < per_task; ++k) {
      std::uint64_t rest = k;
      for (std::size_t i = 1; i < cells; ++i) {
        digits[i] = static_cast<std::int64_t>(rest % 5);
        rest /= 5;
      }
      std::vector<Integer> e(cells);
      for (std::size_t i = 0; i < cells; ++i) e[i] = to_integer(digits[i] - 2);
      const IntegerMatrix m(n, n, std::move(e));
      ++c.trials;
      const CokernelStructure got = cokernel(m);
      if (got != oracle::cokernel_by_minors(m)) fail(c, "mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
    return c;
  });
  Check total{"exhaustive n=" + std::to_string(n) + ", |entries| <= 2, vs determinantal divisors"};
  for (const auto& p : parts) absorb(total, p);
  return total;
}

}  // namespace

Report lattice_suite(std::uint64_t seed, std::uint64_t bases) {
  Report rep{"lattice", {}};
  Check inner{"inner products of R_ij"}, det{"Gram determinant of R basis"};
  const Chunking chunks{bases, 100};
  auto parts = run_tasks<std::array<Check, 2>>(chunks.tasks(), [&](std::size_t t) {
    Rng rng = task_rng(seed, Stream::verify, 100 + t);
    std::array<Check, 2> c;
    for (std::uint64_t i = 0; i < chunks.size(t); ++i) {
      const LatticeBasis b = random_basis(rng);
      ++c[0].trials;
      ++c[1].trials;
      if (!check_inner_product_identity(b)) fail(c[0], "rank " + std::to_string(b.rank()) + " dim " + std::to_string(b.dim()));
      if (!check_det_identity(b)) fail(c[1], "rank " + std::to_string(b.rank()) + " dim " + std::to_string(b.dim()));
    }
    return c;
  });
  for (const auto& p : parts) {
    absorb(inner, p[0]);
    absorb(det, p[1]);
  }
  rep.checks = {inner, det};
  return rep;
}

Report snf_suite(std::uint64_t seed) {
  Report rep{"snf", {}};

  Check pf{"Pf^2 = det, n <= 8"};
  Check pf_oracle{"Pf = expansion oracle, n <= 6"};
  Check paired{"alternating torsion pairs up"};
  {
    const Chunking chunks{10'000, 250};
    auto parts = run_tasks<std::array<Check, 3>>(chunks.tasks(), [&](std::size_t t) {
      Rng rng = task_rng(seed, Stream::verify, 200 + t);
      std::array<Check, 3> c;
      for (std::uint64_t i = 0; i < chunks.size(t); ++i) {
        const std::size_t n = 2 + (t * chunks.chunk + i) % 7;  // 2..8
        const std::int64_t bound = (i % 3 == 0) ? 1000 : 3;
        const AlternatingMatrix a = random_alt(n, bound, rng);
        const Integer p = pfaffian(a);
        ++c[0].trials;
        if ((n % 2 == 0 ? p * p : Integer(0)) != determinant(a.to_full())) fail(c[0], "n=" + std::to_string(n));
        if (n <= 6) {
          ++c[1].trials;
          if (p != oracle::pfaffian_expansion(a)) fail(c[1], "n=" + std::to_string(n));
        }
        ++c[2].trials;
        if (!has_paired_torsion(cokernel(a))) fail(c[2], "n=" + std::to_string(n));
      }
      return c;
    });
    for (const auto& p : parts) {
      absorb(pf, p[0]);
      absorb(pf_oracle, p[1]);
      absorb(paired, p[2]);
    }
  }

  Check recon{"U A V = diag, U and V unimodular"};
  {
    Rng rng = task_rng(seed, Stream::verify, 300);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int i = 0; i < 1000; ++i) {
      const std::size_t r = dim(rng), c = dim(rng);
      const IntegerMatrix m = random_matrix(r, c, i % 2 ? 50 : 4, rng);
      const SmithDecomposition s = smith_normal_form(m);
      ++recon.trials;
      std::vector<Integer> diag(std::min(r, c), Integer(0));
      std::copy(s.divisors.begin(), s.divisors.end(), diag.begin());
      bool ok = s.U * m * s.V == IntegerMatrix::diagonal(r, c, diag);
      ok = ok && abs(determinant(s.U)) == 1 && abs(determinant(s.V)) == 1;
      for (std::size_t k = 1; ok && k < s.divisors.size(); ++k)
        if (s.divisors[k - 1] != 0 && s.divisors[k] % s.divisors[k - 1] != 0) ok = false;
      if (!ok) fail(recon, std::to_string(r) + "x" + std::to_string(c) + " trial " + std::to_string(i));
    }
  }

  rep.checks = {pf, pf_oracle, paired, recon};
  for (unsigned n = 1; n <= 3; ++n) rep.checks.push_back(exhaustive_square(n));

  Check alt{"exhaustive alternating n=4, |entries| <= 2, vs determinantal divisors"};
  for (std::uint64_t k = 0; k < 15625; ++k) {
    std::vector<Integer> up(6);
    std::uint64_t rest = k;
    for (auto& v : up) {
      v = to_integer(static_cast<std::int64_t>(rest % 5) - 2);
      rest /= 5;
    }
    const AlternatingMatrix a(4, std::move(up));
    const CokernelStructure c = cokernel(a);
    ++alt.trials;
    if (c != oracle::cokernel_by_minors(a.to_full()) || !has_paired_torsion(c)) fail(alt, "k=" + std::to_string(k));
  }
  rep.checks.push_back(alt);

  Check quot{"nonsingular n <= 3 vs quotient-group enumeration"};
  {
    Rng rng = task_rng(seed, Stream::verify, 400);
    for (int i = 0; i < 3000; ++i) {
      const std::size_t n = 1 + i % 3;
      const IntegerMatrix m = random_matrix(n, n, 2, rng);
      const Integer d = abs(determinant(m));
      if (d == 0 || d > 64) continue;
      ++quot.trials;
      if (oracle::quotient_kernel_counts(m) != oracle::kernel_counts_from(cokernel(m), d.get_ui()))
        fail(quot, "n=" + std::to_string(n) + " trial " + std::to_string(i));
    }
  }
  rep.checks.push_back(quot);
  return rep;
}

Report table_suite() {
  // Printed percentages for H = 10^10 .. 10^15: rank 0, 1, >= 2, >= 3.
  static constexpr std::array<std::array<double, 4>, 6> printed{{{30.8, 42.7, 19.2, 7.3},
                                                                  {32.6, 43.9, 17.4, 6.0},
                                                                  {34.2, 45.0, 15.8, 5.0},
                                                                  {35.6, 45.9, 14.4, 4.1},
                                                                  {36.9, 46.6, 13.0, 3.4},
                                                                  {38.1, 47.2, 11.9, 2.8}}};
  const std::vector<double> hs{1e10, 1e11, 1e12, 1e13, 1e14, 1e15};
  const auto rows = predicted_table(hs);
  Report rep{"table", {}};
  Check c{"prediction table to 0.1 percentage point"};
  double worst = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::array<double, 4> got{rows[i].rank0, rows[i].rank1, rows[i].rank_ge2, rows[i].rank_ge3};
    for (std::size_t j = 0; j < 4; ++j) {
      ++c.trials;
      const double diff = std::abs(got[j] - printed[i][j]);
      worst = std::max(worst, diff);
      if (diff > 0.1) fail(c, "H=1e" + std::to_string(10 + i) + " column " + std::to_string(j));
    }
  }
  if (c.failures == 0) c.detail = "max deviation " + format_double(worst, 4);
  rep.checks.push_back(c);
  return rep;
}

Report period_suite(std::uint64_t seed) {
  Report rep{"period", {}};
  Rng rng = task_rng(seed, Stream::verify, 500);
  std::uniform_real_distribution<double> log_h(3.0, 15.0);
  std::vector<CurveParams> curves;
  for (int i = 0; i < 100; ++i) curves.push_back(sample_curve_in_band(std::pow(10.0, log_h(rng)), rng));

  Check quad{"AGM vs quadrature, relative 1e-8"};
  double worst = 0;
  for (const auto& e : curves) {
    ++quad.trials;
    try {
      const double agm = real_period(e.a, e.b, 1e-9).omega;
      const double q = oracle::quadrature_period(e.a.get_d(), e.b.get_d());
      const double rel = std::abs(agm - q) / q;
      worst = std::max(worst, rel);
      if (!(rel <= 1e-8)) fail(quad, "A=" + e.a.get_str() + " B=" + e.b.get_str());
    } catch (const std::exception& ex) {
      fail(quad, ex.what());
    }
  }
  if (quad.failures == 0) quad.detail = "max relative difference " + format_double(worst);

  Check scale{"lambda * Omega(lambda^4 A, lambda^6 B) = Omega(A, B), relative 1e-9"};
  for (const auto& e : curves) {
    try {
      const double base = real_period(e.a, e.b, 1e-10).omega;
      for (long lambda : {2L, 3L, 7L}) {
        ++scale.trials;
        const Integer l(lambda);
        const Integer l2 = l * l;
        const double scaled = real_period(e.a * l2 * l2, e.b * l2 * l2 * l2, 1e-10).omega * static_cast<double>(lambda);
        if (!(std::abs(scaled - base) <= 1e-9 * base)) fail(scale, "A=" + e.a.get_str() + " lambda=" + std::to_string(lambda));
      }
    } catch (const std::exception& ex) {
      ++scale.trials;
      fail(scale, ex.what());
    }
  }

  Check scan{"Omega H^{1/12} positive, bounded by C log H over 1000 curves"};
  try {
    const PeriodScan s = period_bound_scan(1e3, 1e24, 1000, seed);
    for (const auto& p : s.samples) {
      ++scan.trials;
      if (!(p.normalized > 0) || !std::isfinite(p.normalized)) fail(scan, "A=" + p.curve.a.get_str());
    }
    if (scan.failures == 0)
      scan.detail = "C = " + format_double(s.normalized_log.max, 4) + ", min Omega H^{1/12} = " +
                    format_double(s.normalized.min, 4);
  } catch (const std::exception& ex) {
    ++scan.trials;
    fail(scan, ex.what());
  }
  rep.checks = {quad, scale, scan};
  return rep;
}

}  // namespace altsha::verify
