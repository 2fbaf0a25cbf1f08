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

#include "altsha/small_kernels.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace altsha::small {

namespace {

constexpr double kSafeLog2 = 62.0;

std::size_t upper_index(std::size_t i, std::size_t j, std::size_t n) {
  // i < j
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::size_t bareiss_rank(std::int64_t* m, std::size_t rows, std::size_t cols) {
  std::int64_t prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[r * cols + j]);
    const __int128 p = m[r * cols + c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const __int128 lead = m[i * cols + c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        const __int128 v = p * m[i * cols + j] - lead * m[r * cols + j];
        m[i * cols + j] = static_cast<std::int64_t>(v / prev);
      }
      m[i * cols + c] = 0;
    }
    prev = m[r * cols + c];
    ++r;
  }
  return r;
}

}  // namespace

double log2_hadamard_bound(std::span<const std::int64_t> m, std::size_t rows, std::size_t cols) {
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = static_cast<double>(m[i * cols + j]);
      s += v * v;
    }
    if (s > 1.0) total += 0.5 * std::log2(s);
  }
  return total;
}

std::optional<std::size_t> rank(std::span<const std::int64_t> m, std::size_t rows, std::size_t cols) {
  if (rows * cols != m.size()) throw std::invalid_argument("small::rank: size mismatch");
  // Small slack for the floating-point bound itself.
  if (log2_hadamard_bound(m, rows, cols) > kSafeLog2 - 0.5) return std::nullopt;
  std::array<std::int64_t, kMaxDim * kMaxDim> buf{};
  if (m.size() > buf.size()) return std::nullopt;
  std::copy(m.begin(), m.end(), buf.begin());
  return bareiss_rank(buf.data(), rows, cols);
}

std::optional<std::size_t> alternating_rank(std::span<const std::int64_t> upper, std::size_t n) {
  if (n > kMaxDim) return std::nullopt;
  if (upper.size() != n * (n ? n - 1 : 0) / 2) throw std::invalid_argument("small::alternating_rank: size mismatch");
  std::array<std::int64_t, kMaxDim * kMaxDim> buf{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t v = upper[upper_index(i, j, n)];
      buf[i * n + j] = v;
      buf[j * n + i] = -v;
    }
  }
  if (log2_hadamard_bound(std::span<const std::int64_t>(buf.data(), n * n), n, n) > kSafeLog2 - 0.5)
    return std::nullopt;
  return bareiss_rank(buf.data(), n, n);
}

namespace {

__int128 pf_rec(const std::int64_t* a, std::size_t n, const std::size_t* idx, std::size_t k) {
  if (k == 0) return 1;
  const std::size_t first = idx[0];
  std::array<std::size_t, kMaxDim> rest{};
  __int128 total = 0;
  for (std::size_t t = 1; t < k; ++t) {
    const std::int64_t v = a[first * n + idx[t]];
    if (v == 0) continue;
    std::size_t m = 0;
    for (std::size_t s = 1; s < k; ++s)
      if (s != t) rest[m++] = idx[s];
    const __int128 sub = pf_rec(a, n, rest.data(), m);
    total += (t % 2 == 1 ? 1 : -1) * static_cast<__int128>(v) * sub;
  }
  return total;
}

}  // namespace

__int128 pfaffian(std::span<const std::int64_t> upper, std::size_t n) {
  if (n % 2) return 0;
  if (n > 8) throw std::invalid_argument("small::pfaffian: n > 8");
  std::array<std::int64_t, 64> full{};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      full[i * n + j] = upper[upper_index(i, j, n)];
      full[j * n + i] = -full[i * n + j];
    }
  std::array<std::size_t, kMaxDim> idx{};
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return pf_rec(full.data(), n, idx.data(), n);
}

}  // namespace altsha::small
