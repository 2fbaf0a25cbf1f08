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

/**
 * @brief Random alternating-matrix model for ranks and Sha of elliptic curves.
 *
 * A curve of height H is modelled by choosing n uniformly from
 * {ceil(eta(H)), ceil(eta(H)) + 1} and an n x n alternating integer matrix A
 * with entries uniform in [-X(H), X(H)]. The corank of A stands in for the
 * Mordell-Weil rank and the torsion of coker A for Sha.
 *
 * All Monte Carlo entry points split their work into fixed-size tasks whose
 * generators are derived from (seed, stream, task index); counts are merged
 * by addition, so results do not depend on the thread count.
 */

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "altsha/curves.hpp"
#include "altsha/exact_linalg.hpp"
#include "altsha/groups.hpp"
#include "altsha/integer.hpp"
#include "altsha/parallel.hpp"

namespace altsha {

enum class EtaSchedule {
  /// eta = max(2, floor(ln(H^c) / ln 3)) with c the calibration exponent.
  log3_floor,
  /// eta fixed at ModelConfig::fixed_eta.
  fixed,
};

std::string to_string(EtaSchedule s);
EtaSchedule parse_eta_schedule(const std::string& name);

struct ModelConfig {
  EtaSchedule schedule = EtaSchedule::log3_floor;
  double fixed_eta = 2.0;
  std::int64_t x_min = 2;
  double calibration_exponent = 1.0 / 12.0;
  std::uint64_t seed = 20260101;
  std::uint64_t samples_per_point = 10'000;

  /// Throws std::invalid_argument on x_min < 2, exponent <= 0, eta < 1.
  void validate() const;
};

struct ModelParams {
  double eta;
  /// ceil(eta); the draw uses n_low or n_low + 1.
  unsigned n_low;
  std::int64_t x;
};

/// Deterministic part of the schedule at height H (H >= 100):
///   X = max(x_min, ceil(H^{c / eta})).
ModelParams model_schedule(double h, const ModelConfig& cfg);

struct ModelChoice {
  double eta;
  unsigned n;
  std::int64_t x;
};

/// Schedule plus the uniform choice of n from {n_low, n_low + 1}.
ModelChoice model_params(double h, const ModelConfig& cfg, Rng& rng);

struct ModelDraw {
  double height;
  unsigned n;
  std::int64_t x;
  unsigned rk_prime;
  /// Invariant factors of the cokernel torsion, "[e1,e2,...]".
  std::string sha_label;
  Integer sha_order;
};

/// Entries a_ij (i < j) independent and uniform on [-x, x].
AlternatingMatrix random_alternating(unsigned n, std::int64_t x, Rng& rng);

/// One draw of (rk', Sha') for a curve of height H.
ModelDraw draw_model(double h, const ModelConfig& cfg, Rng& rng);

/// Only the corank of one draw; shares the random stream layout of
/// draw_model (n first, then the entries).
unsigned draw_model_corank(double h, const ModelConfig& cfg, Rng& rng);

// ---------------------------------------------------------------------------

/// Counts keyed by a label (group label or integer rank rendered as text).
struct EmpiricalDistribution {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(const std::string& key, std::uint64_t c = 1);
  void merge(const EmpiricalDistribution& other);
  double frequency(const std::string& key) const;
  std::uint64_t count(const std::string& key) const;
};

/// Binomial estimate with standard error sqrt(p(1-p)/N).
struct Estimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  double std_error = 0.0;
  /// True when hits/trials is an exact population fraction.
  bool exact = false;
};

Estimate make_estimate(std::uint64_t hits, std::uint64_t trials, bool exact = false);

enum class CorankMode { exact, monte_carlo };

inline constexpr std::uint64_t kExactEnumerationCap = 1'000'000'000ULL;

/// Prob(kernel_rank >= r) over alternating n x n matrices with entries in
/// [-x, x]. Exact mode enumerates all (2x+1)^{n(n-1)/2} matrices (capped).
Estimate empirical_corank_prob(unsigned n, std::int64_t x, unsigned r, CorankMode mode, std::uint64_t samples,
                               std::uint64_t seed, Execution exec = Execution::parallel);

struct ShaDistributionResult {
  /// p-part labels among draws with kernel_rank == r.
  EmpiricalDistribution distribution;
  /// All draws made, accepted or not.
  std::uint64_t draws = 0;
};

/// Distribution of (coker A)_tors[p^inf] conditioned on kernel_rank == r, with
/// `samples` accepted draws. Requires r in {0, 1} and n = r mod 2.
ShaDistributionResult empirical_sha_distribution(unsigned n, std::int64_t x, unsigned r, std::uint64_t p,
                                                 std::uint64_t samples, std::uint64_t seed,
                                                 Execution exec = Execution::parallel);

/// Fraction of corank-0 draws whose full cokernel torsion is Z/e x Z/e.
Estimate empirical_square_cyclic_fraction(unsigned n, std::int64_t x, std::uint64_t samples, std::uint64_t seed,
                                          Execution exec = Execution::parallel);

/// Structure of coker of an n x n p-adic matrix read from its reduction mod
/// p^precision: exponents of the Smith form, with `precision` meaning
/// "divisible by p^precision" (undetermined).
std::vector<unsigned> padic_smith_exponents(std::span<const std::uint64_t> entries, unsigned n, std::uint64_t p,
                                            unsigned precision);

struct ClDistributionResult {
  EmpiricalDistribution distribution;
  /// Draws that needed extra p-adic digits before their structure was certified.
  std::uint64_t refined = 0;
};

/// Distribution of (coker A)[p^inf] for uniform n x n matrices over Z_p.
/// Entries are drawn mod p^k and extended by two further random digits
/// until every Smith exponent is below the working precision. Requires k >= 5.
ClDistributionResult empirical_cl_distribution(unsigned n, std::uint64_t p, unsigned k, std::uint64_t samples,
                                               std::uint64_t seed, Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------

struct PowerFit {
  double slope;
  double intercept;
  double r2;
};

/// Least-squares line through (log x, log y). Needs >= 3 points with x, y > 0.
PowerFit exponent_fit(std::span<const std::pair<double, double>> points);

struct SurveyRecord {
  Integer h_lo;
  Integer h_hi;
  unsigned r;
  std::uint64_t samples;
  std::uint64_t hits;
  double p_hat;
  double std_error;
};

struct SurveyResult {
  std::vector<SurveyRecord> records;
  /// Slope of log Prob(rk' >= r) against log H, keyed by r; only thresholds
  /// with hits in at least three bands are fitted.
  std::map<unsigned, PowerFit> fits;
};

inline constexpr unsigned kSurveyMaxRank = 5;

/// For each H in the grid, samples curves uniformly from the band (H/2, H],
/// draws rk' at each curve's height and tallies Prob(rk' >= r), r = 1..5.
SurveyResult rank_survey(const std::vector<Integer>& h_grid, std::uint64_t curves_per_band, const ModelConfig& cfg,
                         Execution exec = Execution::parallel);

struct PredictedRow {
  double h;
  double rank0;
  double rank1;
  double rank_ge2;
  double rank_ge3;
};

/// Percentages 50(1-H^{-1/24}), 50(1-H^{-1/12}), 50 H^{-1/24}, 50 H^{-1/12}.
std::vector<PredictedRow> predicted_table(std::span<const double> h_list);

}  // namespace altsha
