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

#include <omp.h>

#include <cstdint>
#include <exception>
#include <random>
#include <vector>

namespace altsha {

/// Monte Carlo generator. Every task owns one, seeded from
/// (master seed, stream, task index).
using Rng = std::mt19937_64;

enum class Execution { serial, parallel };

/// Stream identifiers keep different experiments sharing a master seed
/// statistically independent.
enum class Stream : std::uint64_t {
  model_draw = 1,
  curve_sample = 2,
  sha_distribution = 3,
  cl_distribution = 4,
  corank = 5,
  square_cyclic = 6,
  squarefree_pfaffian = 7,
  period_scan = 8,
  survey = 9,
  verify = 10,
};

inline Rng task_rng(std::uint64_t seed, Stream stream, std::uint64_t task) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(task),
                    static_cast<std::uint32_t>(task >> 32)};
  return Rng(seq);
}

/// Runs fn(task) for every task index and returns the results in task order.
/// The partition into tasks is fixed by the caller, so merging the returned
/// vector gives the same answer for any thread count.
template <class Result, class Fn>
std::vector<Result> run_tasks(std::size_t n_tasks, Fn&& fn, Execution exec = Execution::parallel) {
  std::vector<Result> out(n_tasks);
  if (exec == Execution::serial || n_tasks < 2) {
    for (std::size_t t = 0; t < n_tasks; ++t) out[t] = fn(t);
    return out;
  }
  std::vector<std::exception_ptr> errors(n_tasks);
  const auto n = static_cast<std::int64_t>(n_tasks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < n; ++t) {
    try {
      out[static_cast<std::size_t>(t)] = fn(static_cast<std::size_t>(t));
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Splits `total` work items into fixed-size chunks; the last may be short.
struct Chunking {
  std::uint64_t total;
  std::uint64_t chunk;

  std::size_t tasks() const { return static_cast<std::size_t>((total + chunk - 1) / chunk); }
  std::uint64_t size(std::size_t t) const {
    const std::uint64_t begin = t * chunk;
    return total - begin < chunk ? total - begin : chunk;
  }
};

}  // namespace altsha
