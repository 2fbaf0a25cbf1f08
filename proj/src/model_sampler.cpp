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

#include "altsha/model_sampler.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "altsha/matrix_counting.hpp"
#include "altsha/small_kernels.hpp"

namespace altsha {

// ---------------------------------------------------------------------------
// Schedule

std::string to_string(EtaSchedule s) {
  switch (s) {
    case EtaSchedule::log3_floor:
      return "log3_floor";
    case EtaSchedule::fixed:
      return "fixed";
  }
  return "unknown";
}

EtaSchedule parse_eta_schedule(const std::string& name) {
  if (name == "log3_floor" || name == "default") return EtaSchedule::log3_floor;
  if (name == "fixed") return EtaSchedule::fixed;
  throw std::invalid_argument("unknown eta schedule '" + name + "'");
}

void ModelConfig::validate() const {
  if (x_min < 2) throw std::invalid_argument("x_min must be >= 2");
  if (!(calibration_exponent > 0)) throw std::invalid_argument("calibration_exponent must be > 0");
  if (schedule == EtaSchedule::fixed && !(fixed_eta >= 1)) throw std::invalid_argument("fixed_eta must be >= 1");
}

ModelParams model_schedule(double h, const ModelConfig& cfg) {
  if (!(h >= 100)) throw std::invalid_argument("model_schedule: H must be >= 100");
  const double log_target = cfg.calibration_exponent * std::log(h);  // ln H^c
  double eta = 0;
  switch (cfg.schedule) {
    case EtaSchedule::log3_floor:
      eta = std::max(2.0, std::floor(log_target / std::log(3.0) + 1e-9));
      break;
    case EtaSchedule::fixed:
      eta = cfg.fixed_eta;
      break;
  }
  const double x_real = std::exp(log_target / eta);
  const auto x = std::max<std::int64_t>(cfg.x_min, static_cast<std::int64_t>(std::ceil(x_real - 1e-9)));
  return {eta, static_cast<unsigned>(std::ceil(eta - 1e-12)), x};
}

ModelChoice model_params(double h, const ModelConfig& cfg, Rng& rng) {
  const ModelParams s = model_schedule(h, cfg);
  std::uniform_int_distribution<unsigned> coin(0, 1);
  return {s.eta, s.n_low + coin(rng), s.x};
}

AlternatingMatrix random_alternating(unsigned n, std::int64_t x, Rng& rng) {
  std::uniform_int_distribution<std::int64_t> entry(-x, x);
  std::vector<Integer> upper(n * (n ? n - 1 : 0) / 2);
  for (auto& v : upper) v = to_integer(entry(rng));
  return AlternatingMatrix(n, std::move(upper));
}

ModelDraw draw_model(double h, const ModelConfig& cfg, Rng& rng) {
  const ModelChoice c = model_params(h, cfg, rng);
  const AlternatingMatrix a = random_alternating(c.n, c.x, rng);
  const CokernelStructure coker = cokernel(a);
  return {h, c.n, c.x, static_cast<unsigned>(coker.free_rank), coker.label(), coker.torsion_order()};
}

unsigned draw_model_corank(double h, const ModelConfig& cfg, Rng& rng) {
  const ModelChoice c = model_params(h, cfg, rng);
  std::uniform_int_distribution<std::int64_t> entry(-c.x, c.x);
  std::vector<std::int64_t> upper(c.n * (c.n - 1) / 2);
  for (auto& v : upper) v = entry(rng);
  if (auto r = small::alternating_rank(upper, c.n)) return c.n - static_cast<unsigned>(*r);
  std::vector<Integer> big(upper.size());
  std::transform(upper.begin(), upper.end(), big.begin(), [](std::int64_t v) { return to_integer(v); });
  return static_cast<unsigned>(kernel_rank(AlternatingMatrix(c.n, std::move(big))));
}

// ---------------------------------------------------------------------------
// Distributions and estimates

void EmpiricalDistribution::add(const std::string& key, std::uint64_t c) {
  counts[key] += c;
  total += c;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  for (const auto& [k, c] : other.counts) counts[k] += c;
  total += other.total;
}

double EmpiricalDistribution::frequency(const std::string& key) const {
  return total ? static_cast<double>(count(key)) / static_cast<double>(total) : 0.0;
}

std::uint64_t EmpiricalDistribution::count(const std::string& key) const {
  auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

Estimate make_estimate(std::uint64_t hits, std::uint64_t trials, bool exact) {
  Estimate e{hits, trials, 0.0, 0.0, exact};
  if (trials) {
    e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
    if (!exact) e.std_error = std::sqrt(e.p_hat * (1 - e.p_hat) / static_cast<double>(trials));
  }
  return e;
}

namespace {

constexpr std::uint64_t kChunk = 4096;
constexpr std::uint64_t kConditionedChunk = 256;
constexpr std::uint64_t kMaxAttemptsPerAccept = 1000;

std::uint64_t ipow_u64(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

Estimate empirical_corank_prob(unsigned n, std::int64_t x, unsigned r, CorankMode mode, std::uint64_t samples,
                               std::uint64_t seed, Execution exec) {
  if (x < 0) throw std::invalid_argument("empirical_corank_prob: x must be >= 0");
  if (mode == CorankMode::exact) {
    const RankHistogram hist = count_alternating_by_rank(n, x, Norm::box, kExactEnumerationCap, exec);
    std::uint64_t hits = 0;
    for (const auto& [rk, c] : hist.counts)
      if (n - rk >= r) hits += c;
    return make_estimate(hits, hist.total(), true);
  }
  if (samples == 0) throw std::invalid_argument("empirical_corank_prob: samples must be positive");
  const Chunking chunks{samples, kChunk};
  auto hits = run_tasks<std::uint64_t>(
      chunks.tasks(),
      [&](std::size_t t) {
        Rng rng = task_rng(seed, Stream::corank, t);
        std::uniform_int_distribution<std::int64_t> entry(-x, x);
        std::vector<std::int64_t> upper(n * (n ? n - 1 : 0) / 2);
        std::uint64_t h = 0;
        for (std::uint64_t s = 0; s < chunks.size(t); ++s) {
          for (auto& v : upper) v = entry(rng);
          std::size_t rk;
          if (auto fast = small::alternating_rank(upper, n)) {
            rk = *fast;
          } else {
            std::vector<Integer> big(upper.size());
            std::transform(upper.begin(), upper.end(), big.begin(), [](std::int64_t v) { return to_integer(v); });
            rk = rank(AlternatingMatrix(n, std::move(big)));
          }
          if (n - rk >= r) ++h;
        }
        return h;
      },
      exec);
  return make_estimate(std::accumulate(hits.begin(), hits.end(), std::uint64_t{0}), samples);
}

ShaDistributionResult empirical_sha_distribution(unsigned n, std::int64_t x, unsigned r, std::uint64_t p,
                                                 std::uint64_t samples, std::uint64_t seed, Execution exec) {
  if (r > 1) throw std::invalid_argument("empirical_sha_distribution: r must be 0 or 1");
  if (n % 2 != r % 2) throw std::invalid_argument("empirical_sha_distribution: need n = r (mod 2)");
  if (n < r) throw std::invalid_argument("empirical_sha_distribution: n < r");
  if (!is_prime(p)) throw std::invalid_argument("empirical_sha_distribution: p is not prime");
  const Chunking chunks{samples, kConditionedChunk};
  auto parts = run_tasks<ShaDistributionResult>(
      chunks.tasks(),
      [&](std::size_t t) {
        Rng rng = task_rng(seed, Stream::sha_distribution, t);
        ShaDistributionResult out;
        const std::uint64_t want = chunks.size(t);
        while (out.distribution.total < want) {
          if (++out.draws > kMaxAttemptsPerAccept * want)
            throw std::runtime_error("empirical_sha_distribution: acceptance rate too low");
          const CokernelStructure c = cokernel(random_alternating(n, x, rng));
          if (c.free_rank != r) continue;
          out.distribution.add(p_part(c, p).label());
        }
        return out;
      },
      exec);
  ShaDistributionResult total;
  for (const auto& part : parts) {
    total.distribution.merge(part.distribution);
    total.draws += part.draws;
  }
  return total;
}

Estimate empirical_square_cyclic_fraction(unsigned n, std::int64_t x, std::uint64_t samples, std::uint64_t seed,
                                          Execution exec) {
  if (n % 2) throw std::invalid_argument("empirical_square_cyclic_fraction: corank 0 needs even n");
  const Chunking chunks{samples, kConditionedChunk};
  struct Part {
    std::uint64_t hits = 0, accepted = 0;
  };
  auto parts = run_tasks<Part>(
      chunks.tasks(),
      [&](std::size_t t) {
        Rng rng = task_rng(seed, Stream::square_cyclic, t);
        Part out;
        std::uint64_t draws = 0;
        while (out.accepted < chunks.size(t)) {
          if (++draws > kMaxAttemptsPerAccept * chunks.size(t))
            throw std::runtime_error("empirical_square_cyclic_fraction: acceptance rate too low");
          const CokernelStructure c = cokernel(random_alternating(n, x, rng));
          if (c.free_rank != 0) continue;
          ++out.accepted;
          if (c.is_square_of_cyclic()) ++out.hits;
        }
        return out;
      },
      exec);
  Part total;
  for (const auto& p : parts) {
    total.hits += p.hits;
    total.accepted += p.accepted;
  }
  return make_estimate(total.hits, total.accepted);
}

// ---------------------------------------------------------------------------
// p-adic cokernels

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  // a is a unit mod m.
  __int128 t = 0, new_t = 1, r = m, new_r = a % m;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw std::logic_error("inverse_mod: not a unit");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

unsigned val_mod(std::uint64_t v, std::uint64_t p, unsigned precision) {
  if (v == 0) return precision;
  unsigned e = 0;
  while (v % p == 0) {
    v /= p;
    ++e;
  }
  return e;
}

}  // namespace

std::vector<unsigned> padic_smith_exponents(std::span<const std::uint64_t> entries, unsigned n, std::uint64_t p,
                                            unsigned precision) {
  if (entries.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("padic_smith_exponents: need n*n entries");
  const std::uint64_t mod = ipow_u64(p, precision);
  std::vector<std::uint64_t> a(entries.begin(), entries.end());
  for (auto& v : a) v %= mod;
  auto at = [&](unsigned i, unsigned j) -> std::uint64_t& { return a[static_cast<std::size_t>(i) * n + j]; };
  std::vector<unsigned> exps;
  for (unsigned t = 0; t < n; ++t) {
    unsigned best = precision, bi = t, bj = t;
    for (unsigned i = t; i < n && best > 0; ++i)
      for (unsigned j = t; j < n; ++j) {
        const unsigned v = val_mod(at(i, j), p, precision);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == precision) {
      exps.insert(exps.end(), n - t, precision);
      break;
    }
    for (unsigned j = 0; j < n; ++j) std::swap(at(t, j), at(bi, j));
    for (unsigned i = 0; i < n; ++i) std::swap(at(i, t), at(i, bj));
    const std::uint64_t pv = ipow_u64(p, best);
    const std::uint64_t unit_inv = inverse_mod(at(t, t) / pv, mod);
    for (unsigned i = t + 1; i < n; ++i) {
      if (at(i, t) == 0) continue;
      const std::uint64_t f = mulmod(at(i, t) / pv, unit_inv, mod);
      for (unsigned j = t; j < n; ++j) at(i, j) = (at(i, j) + mod - mulmod(f, at(t, j), mod)) % mod;
    }
    for (unsigned j = t + 1; j < n; ++j) {
      if (at(t, j) == 0) continue;
      const std::uint64_t f = mulmod(at(t, j) / pv, unit_inv, mod);
      for (unsigned i = t; i < n; ++i) at(i, j) = (at(i, j) + mod - mulmod(f, at(i, t), mod)) % mod;
    }
    exps.push_back(best);
  }
  std::sort(exps.begin(), exps.end(), std::greater<>());
  std::erase(exps, 0u);
  return exps;
}

ClDistributionResult empirical_cl_distribution(unsigned n, std::uint64_t p, unsigned k, std::uint64_t samples,
                                               std::uint64_t seed, Execution exec) {
  if (k < 5) throw std::invalid_argument("empirical_cl_distribution: k must be >= 5");
  if (!is_prime(p)) throw std::invalid_argument("empirical_cl_distribution: p is not prime");
  if (std::log2(static_cast<double>(p)) * (k + 2) > 62)
    throw std::invalid_argument("empirical_cl_distribution: p^(k+2) must stay below 2^62");
  const Chunking chunks{samples, kChunk};
  auto parts = run_tasks<ClDistributionResult>(
      chunks.tasks(),
      [&](std::size_t t) {
        Rng rng = task_rng(seed, Stream::cl_distribution, t);
        ClDistributionResult out;
        std::vector<std::uint64_t> m(static_cast<std::size_t>(n) * n);
        for (std::uint64_t s = 0; s < chunks.size(t); ++s) {
          unsigned precision = k;
          std::uniform_int_distribution<std::uint64_t> digit(0, ipow_u64(p, k) - 1);
          for (auto& v : m) v = digit(rng);
          std::vector<unsigned> exps = padic_smith_exponents(m, n, p, precision);
          bool refined = false;
          while (!exps.empty() && exps.front() >= precision) {
            // Append two more p-adic digits to every entry.
            if (std::log2(static_cast<double>(p)) * (precision + 2) > 62)
              throw std::runtime_error("empirical_cl_distribution: precision exhausted");
            std::uniform_int_distribution<std::uint64_t> more(0, p * p - 1);
            const std::uint64_t scale = ipow_u64(p, precision);
            for (auto& v : m) v += scale * more(rng);
            precision += 2;
            exps = padic_smith_exponents(m, n, p, precision);
            refined = true;
          }
          if (refined) ++out.refined;
          out.distribution.add(AbelianPGroup(p, exps).label());
        }
        return out;
      },
      exec);
  ClDistributionResult total;
  for (const auto& part : parts) {
    total.distribution.merge(part.distribution);
    total.refined += part.refined;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Fits, surveys and the closed-form table

PowerFit exponent_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("exponent_fit: need at least 3 points");
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0) || !(y > 0)) throw std::invalid_argument("exponent_fit: values must be positive");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx, dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw std::invalid_argument("exponent_fit: all x values coincide");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0;
  for (const auto& [x, y] : points) {
    const double e = std::log(y) - (intercept + slope * std::log(x));
    ss_res += e * e;
  }
  const double r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, intercept, r2};
}

SurveyResult rank_survey(const std::vector<Integer>& h_grid, std::uint64_t curves_per_band, const ModelConfig& cfg,
                         Execution exec) {
  cfg.validate();
  if (h_grid.size() < 3) throw std::invalid_argument("rank_survey: need at least 3 heights");
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    if (h_grid[i] < 200) throw std::invalid_argument("rank_survey: heights must be >= 200");
    if (i && !(h_grid[i] > h_grid[i - 1])) throw std::invalid_argument("rank_survey: heights must increase");
  }
  if (curves_per_band == 0) throw std::invalid_argument("rank_survey: curves_per_band must be positive");

  const Chunking chunks{curves_per_band, kChunk};
  const std::size_t per_band = chunks.tasks();
  using Hits = std::array<std::uint64_t, kSurveyMaxRank + 1>;
  auto parts = run_tasks<Hits>(
      per_band * h_grid.size(),
      [&](std::size_t task) {
        const std::size_t band = task / per_band, t = task % per_band;
        Rng rng = task_rng(cfg.seed, Stream::survey, (static_cast<std::uint64_t>(band) << 32) | t);
        Hits hits{};
        for (std::uint64_t s = 0; s < chunks.size(t); ++s) {
          const CurveParams c = sample_curve_in_band(h_grid[band], rng);
          const unsigned corank = draw_model_corank(curve_height(c).get_d(), cfg, rng);
          for (unsigned r = 1; r <= kSurveyMaxRank && r <= corank; ++r) ++hits[r];
        }
        return hits;
      },
      exec);

  SurveyResult out;
  std::map<unsigned, std::vector<std::pair<double, double>>> series;
  for (std::size_t band = 0; band < h_grid.size(); ++band) {
    Hits total{};
    for (std::size_t t = 0; t < per_band; ++t)
      for (unsigned r = 1; r <= kSurveyMaxRank; ++r) total[r] += parts[band * per_band + t][r];
    for (unsigned r = 1; r <= kSurveyMaxRank; ++r) {
      const Estimate e = make_estimate(total[r], curves_per_band);
      out.records.push_back({h_grid[band] / 2, h_grid[band], r, curves_per_band, total[r], e.p_hat, e.std_error});
      if (total[r] > 0) series[r].emplace_back(h_grid[band].get_d(), e.p_hat);
    }
  }
  for (const auto& [r, pts] : series)
    if (pts.size() >= 3) out.fits[r] = exponent_fit(pts);
  return out;
}

std::vector<PredictedRow> predicted_table(std::span<const double> h_list) {
  std::vector<PredictedRow> rows;
  for (double h : h_list) {
    const double a = std::pow(h, -1.0 / 24.0), b = std::pow(h, -1.0 / 12.0);
    rows.push_back({h, 50.0 * (1 - a), 50.0 * (1 - b), 50.0 * a, 50.0 * b});
  }
  return rows;
}

}  // namespace altsha
