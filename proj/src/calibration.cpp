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

#include "altsha/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace altsha {

Integer discriminant(const Integer& a, const Integer& b) { return -16 * (4 * a * a * a + 27 * b * b); }

namespace {

using ld = long double;

constexpr ld kPi = std::numbers::pi_v<ld>;

ld polish(ld x, ld a, ld b) {
  for (int i = 0; i < 8; ++i) {
    const ld f = (x * x + a) * x + b;
    const ld d = 3 * x * x + a;
    if (d == 0) break;
    const ld nx = x - f / d;
    if (nx == x) break;
    x = nx;
  }
  return x;
}

// AGM with a relative stopping rule; returns the mean and the last relative gap.
std::pair<ld, ld> agm(ld x, ld y, ld rel) {
  for (int i = 0; i < 64; ++i) {
    const ld gap = std::fabs(x - y) / std::max(x, y);
    if (gap <= rel) return {(x + y) / 2, gap};
    const ld nx = (x + y) / 2;
    y = std::sqrt(x * y);
    x = nx;
  }
  throw std::runtime_error("real_period: AGM did not converge");
}

ld root_error(ld x, ld a, ld b) {
  const ld f = (x * x + a) * x + b;
  const ld d = 3 * x * x + a;
  const ld scale = std::fabs(x * x * x) + std::fabs(a * x) + std::fabs(b);
  const ld noise = scale * std::numeric_limits<ld>::epsilon() * 4;
  return d == 0 ? std::numeric_limits<ld>::infinity() : (std::fabs(f) + noise) / std::fabs(d);
}

}  // namespace

std::vector<long double> real_cubic_roots(long double a, long double b) {
  const ld d = -(4 * a * a * a + 27 * b * b);
  std::vector<ld> roots;
  if (d > 0) {
    const ld r = 2 * std::sqrt(-a / 3);
    ld c = (3 * b / (2 * a)) * std::sqrt(-3 / a);
    c = std::clamp(c, ld(-1), ld(1));
    const ld th = std::acos(c) / 3;
    for (int k = 0; k < 3; ++k) roots.push_back(polish(r * std::cos(th - 2 * kPi * k / 3), a, b));
    std::sort(roots.begin(), roots.end(), std::greater<>());
  } else {
    // Cardano, with the larger cube root taken first to avoid cancellation.
    const ld s = std::sqrt(b * b / 4 + a * a * a / 27);
    const ld t = -b / 2 - (b >= 0 ? s : -s);
    const ld u = std::cbrt(t);
    const ld v = u == 0 ? 0 : -a / (3 * u);
    roots.push_back(polish(u + v, a, b));
  }
  return roots;
}

namespace {

// Period from the real roots (decreasing); agm_gap receives the final relative gap.
ld period_from_roots(const std::vector<ld>& roots, ld a, ld& agm_gap) {
  const ld rel = std::numeric_limits<ld>::epsilon() * 8;
  if (roots.size() == 3) {
    const auto [m, gap] = agm(std::sqrt(roots[0] - roots[1]), std::sqrt(roots[0] - roots[2]), rel);
    agm_gap = gap;
    return 2 * kPi / m;
  }
  const ld e1 = roots[0];
  const ld big = std::sqrt(3 * e1 * e1 + a);
  const auto [m, gap] = agm(std::sqrt(big), std::sqrt((big + ld(1.5) * e1) / 2), rel);
  agm_gap = gap;
  return kPi / m;
}

}  // namespace

PeriodResult real_period(long double a, long double b, double tol) {
  const ld d = -16 * (4 * a * a * a + 27 * b * b);
  if (d == 0) throw std::domain_error("real_period: singular curve");
  const auto roots = real_cubic_roots(a, b);
  ld agm_gap = 0;
  const ld omega = period_from_roots(roots, a, agm_gap);
  // Sensitivity to the residual root error: shift every root by its bound
  // in both directions and keep the largest change.
  ld spread = 0;
  for (int sign : {-1, 1}) {
    std::vector<ld> shifted = roots;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      const ld err = root_error(roots[i], a, b);
      shifted[i] += (i % 2 ? -sign : sign) * err;
    }
    if (shifted.size() == 3 && !(shifted[0] > shifted[1] && shifted[1] > shifted[2])) {
      spread = std::numeric_limits<ld>::infinity();
      break;
    }
    ld g = 0;
    spread = std::max(spread, std::fabs(period_from_roots(shifted, a, g) - omega));
  }
  const ld est = spread + omega * (agm_gap + 16 * std::numeric_limits<ld>::epsilon());
  if (!(est < tol) || !std::isfinite(static_cast<double>(omega)))
    throw std::runtime_error("real_period: tolerance not reached");
  return {static_cast<double>(omega), static_cast<double>(est), roots.size() == 3 ? 2u : 1u};
}

PeriodResult real_period(const Integer& a, const Integer& b, double tol) {
  if (4 * a * a * a + 27 * b * b == 0) throw std::domain_error("real_period: singular curve");
  return real_period(static_cast<ld>(a.get_d()), static_cast<ld>(b.get_d()), tol);
}

SummaryStats summarize(std::vector<double> v) {
  SummaryStats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  const std::array<double, 5> qs{0.05, 0.25, 0.5, 0.75, 0.95};
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double pos = qs[i] * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    s.quantiles[i] = v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  }
  return s;
}

PeriodScan period_bound_scan(double h_lo, double h_hi, std::uint64_t samples, std::uint64_t seed, double tol,
                             Execution exec) {
  if (samples < 100) throw std::invalid_argument("period_bound_scan: need at least 100 samples");
  if (!(h_lo >= 100 && h_lo <= h_hi && h_hi <= kMaxSampleHeight))
    throw std::invalid_argument("period_bound_scan: need 100 <= h_lo <= h_hi <= 1e36");
  const Chunking chunks{samples, 64};
  auto parts = run_tasks<std::vector<PeriodSample>>(
      chunks.tasks(),
      [&](std::size_t t) {
        Rng rng = task_rng(seed, Stream::period_scan, t);
        std::uniform_real_distribution<double> u(std::log(h_lo), std::log(h_hi));
        std::vector<PeriodSample> out;
        for (std::uint64_t s = 0; s < chunks.size(t); ++s) {
          const double h = std::min(h_hi, std::exp(u(rng)));
          const CurveParams c = sample_curve_in_band(std::max(100.0, h), rng);
          const Integer ht = curve_height(c);
          const PeriodResult p = real_period(c.a, c.b, tol);
          const double hd = ht.get_d();
          const double norm = p.omega * std::pow(hd, 1.0 / 12.0);
          out.push_back({c, ht, discriminant(c.a, c.b), p.omega, norm, norm / std::log(hd)});
        }
        return out;
      },
      exec);
  PeriodScan scan;
  for (auto& p : parts) scan.samples.insert(scan.samples.end(), p.begin(), p.end());
  std::vector<double> a, b;
  for (const auto& s : scan.samples) {
    a.push_back(s.normalized);
    b.push_back(s.normalized_log);
  }
  scan.normalized = summarize(std::move(a));
  scan.normalized_log = summarize(std::move(b));
  return scan;
}

std::uint64_t divisor_count(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("divisor_count: m must be positive");
  if (m > kDivisorCountCap) throw std::domain_error("divisor_count: m above 10^18");
  std::uint64_t count = 1;
  for (std::uint64_t p = 2; p * p * p <= m; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    count *= e + 1;
  }
  if (m == 1) return count;
  if (is_prime(m)) return count * 2;
  Integer z;
  mpz_set_ui(z.get_mpz_t(), static_cast<unsigned long>(m));
  if (is_perfect_square(z)) return count * 3;
  return count * 4;
}

}  // namespace altsha
