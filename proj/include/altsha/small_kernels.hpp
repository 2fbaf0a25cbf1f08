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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace altsha::small {

/// Largest dimension handled by the fixed-size kernels below.
inline constexpr std::size_t kMaxDim = 16;

/// log2 of the Hadamard bound prod_i max(1, |row_i|) of a row-major matrix.
double log2_hadamard_bound(std::span<const std::int64_t> m, std::size_t rows, std::size_t cols);

/// Exact rank by fraction-free elimination in 64-bit arithmetic with 128-bit
/// products. Every intermediate is a minor of the input, so the result is
/// exact whenever the Hadamard bound is below 2^62; returns nullopt otherwise.
std::optional<std::size_t> rank(std::span<const std::int64_t> m, std::size_t rows, std::size_t cols);

/// Same for an alternating n x n matrix given by its strict upper triangle.
std::optional<std::size_t> alternating_rank(std::span<const std::int64_t> upper, std::size_t n);

/// Pfaffian by expansion along the first row; n <= 8 and |entries| small
/// enough that no (n/2)-fold product overflows 2^126.
__int128 pfaffian(std::span<const std::int64_t> upper, std::size_t n);

}  // namespace altsha::small
