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

#include "altsha/exact_linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "altsha/small_kernels.hpp"

namespace altsha {

// ---------------------------------------------------------------------------
// IntegerMatrix

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw std::invalid_argument("IntegerMatrix: entry count does not match dimensions");
}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::diagonal(std::size_t rows, std::size_t cols, std::span<const Integer> diag) {
  IntegerMatrix m(rows, cols);
  for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) m(i, i) = diag[i];
  return m;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("IntegerMatrix product: dimension mismatch");
  IntegerMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// ---------------------------------------------------------------------------
// AlternatingMatrix

AlternatingMatrix::AlternatingMatrix(std::size_t n, std::vector<Integer> upper)
    : n_(n), upper_(std::move(upper)) {
  if (upper_.size() != n * (n ? n - 1 : 0) / 2)
    throw std::invalid_argument("AlternatingMatrix: need n(n-1)/2 upper entries");
}

std::size_t AlternatingMatrix::index(std::size_t i, std::size_t j) const {
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

Integer AlternatingMatrix::at(std::size_t i, std::size_t j) const {
  if (i == j) return 0;
  return i < j ? upper_[index(i, j)] : Integer(-upper_[index(j, i)]);
}

void AlternatingMatrix::set(std::size_t i, std::size_t j, const Integer& v) {
  if (i == j) throw std::invalid_argument("AlternatingMatrix::set: diagonal is fixed at zero");
  if (i < j)
    upper_[index(i, j)] = v;
  else
    upper_[index(j, i)] = -v;
}

AlternatingMatrix AlternatingMatrix::from_full(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("alternating matrix must be square");
  const std::size_t n = m.rows();
  AlternatingMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) != 0) throw std::invalid_argument("alternating matrix has nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m(j, i) != -m(i, j)) throw std::invalid_argument("matrix is not antisymmetric");
      a.upper_[a.index(i, j)] = m(i, j);
    }
  }
  return a;
}

IntegerMatrix AlternatingMatrix::to_full() const {
  IntegerMatrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) {
      m(i, j) = upper_[index(i, j)];
      m(j, i) = -m(i, j);
    }
  return m;
}

// ---------------------------------------------------------------------------
// Rank and determinant

namespace {

std::optional<std::vector<std::int64_t>> narrow(std::span<const Integer> v) {
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!fits_int64(x)) return std::nullopt;
    out.push_back(to_int64(x));
  }
  return out;
}

}  // namespace

std::size_t rank_bareiss(const IntegerMatrix& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<Integer> m(a.entries().begin(), a.entries().end());
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[r * cols + j]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i * cols + j] = m[r * cols + c] * m[i * cols + j] - m[i * cols + c] * m[r * cols + j];
        mpz_divexact(m[i * cols + j].get_mpz_t(), m[i * cols + j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i * cols + c] = 0;
    }
    prev = m[r * cols + c];
    ++r;
  }
  return r;
}

std::size_t rank(const IntegerMatrix& a) {
  if (a.rows() <= small::kMaxDim && a.cols() <= small::kMaxDim) {
    if (auto narrowed = narrow(a.entries()))
      if (auto r = small::rank(*narrowed, a.rows(), a.cols())) return *r;
  }
  return rank_bareiss(a);
}

std::size_t rank(const AlternatingMatrix& a) {
  if (a.size() <= small::kMaxDim) {
    if (auto narrowed = narrow(a.upper()))
      if (auto r = small::alternating_rank(*narrowed, a.size())) return *r;
  }
  return rank_bareiss(a.to_full());
}

std::size_t kernel_rank(const AlternatingMatrix& a) { return a.size() - rank(a); }

Integer determinant(const IntegerMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  std::vector<Integer> m(a.entries().begin(), a.entries().end());
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv * n + k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[piv * n + j], m[k * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i * n + j] = m[k * n + k] * m[i * n + j] - m[i * n + k] * m[k * n + j];
        mpz_divexact(m[i * n + j].get_mpz_t(), m[i * n + j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k * n + k];
  }
  return sign * m[n * n - 1];
}

// ---------------------------------------------------------------------------
// Pfaffian: pair elimination on the rational Schur complement.
//   Pf [[B, C], [-C^T, D]] = Pf(B) * Pf(D + C^T B^{-1} C),  B = [[0, a], [-a, 0]].

Integer pfaffian(const AlternatingMatrix& a) {
  const std::size_t n = a.size();
  if (n % 2) return 0;
  if (n == 0) return 1;
  std::vector<mpq_class> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a.at(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> mpq_class& { return m[i * n + j]; };
  auto swap_index = [&](std::size_t x, std::size_t y) {
    for (std::size_t j = 0; j < n; ++j) std::swap(at(x, j), at(y, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(at(i, x), at(i, y));
  };

  mpq_class result = 1;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    std::size_t piv = k + 1;
    while (piv < n && at(k, piv) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k + 1) {
      swap_index(k + 1, piv);
      result = -result;
    }
    const mpq_class pivot = at(k, k + 1);
    result *= pivot;
    for (std::size_t i = k + 2; i < n; ++i) {
      for (std::size_t l = i + 1; l < n; ++l) {
        at(i, l) += (at(k + 1, i) * at(k, l) - at(k, i) * at(k + 1, l)) / pivot;
        at(l, i) = -at(i, l);
      }
    }
  }
  if (result.get_den() != 1) throw std::logic_error("pfaffian: non-integral result");
  return result.get_num();
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

template <bool Track>
std::vector<Integer> smith_impl(IntegerMatrix a, IntegerMatrix* u, IntegerMatrix* v) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t k_max = std::min(m, n);

  auto row_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) {
    // row_dst -= q * row_src
    for (std::size_t j = 0; j < n; ++j)
      if (a(src, j) != 0) a(dst, j) -= q * a(src, j);
    if constexpr (Track)
      for (std::size_t j = 0; j < m; ++j)
        if ((*u)(src, j) != 0) (*u)(dst, j) -= q * (*u)(src, j);
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t i = 0; i < m; ++i)
      if (a(i, src) != 0) a(i, dst) -= q * a(i, src);
    if constexpr (Track)
      for (std::size_t i = 0; i < n; ++i)
        if ((*v)(i, src) != 0) (*v)(i, dst) -= q * (*v)(i, src);
  };
  auto swap_rows = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(x, j), a(y, j));
    if constexpr (Track)
      for (std::size_t j = 0; j < m; ++j) std::swap((*u)(x, j), (*u)(y, j));
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(a(i, x), a(i, y));
    if constexpr (Track)
      for (std::size_t i = 0; i < n; ++i) std::swap((*v)(i, x), (*v)(i, y));
  };

  Integer q;
  for (std::size_t t = 0; t < k_max; ++t) {
    for (;;) {
      // Minimal |entry| pivot in the trailing block.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (a(i, j) == 0) continue;
          if (pi == m || mpz_cmpabs(a(i, j).get_mpz_t(), a(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      if (pi == m) {
        std::vector<Integer> d(k_max);
        for (std::size_t i = 0; i < t; ++i) d[i] = a(i, i);
        return d;
      }
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        row_axpy(i, t, q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        col_axpy(j, t, q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Row and column t are clear; enforce divisibility of the remainder.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_axpy(t, bad, Integer(-1));
    }
    if (a(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) a(t, j) = -a(t, j);
      if constexpr (Track)
        for (std::size_t j = 0; j < m; ++j) (*u)(t, j) = -(*u)(t, j);
    }
  }
  std::vector<Integer> d(k_max);
  for (std::size_t i = 0; i < k_max; ++i) d[i] = a(i, i);
  return d;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntegerMatrix& a) {
  SmithDecomposition out{IntegerMatrix::identity(a.rows()), IntegerMatrix::identity(a.cols()), {}};
  out.divisors = smith_impl<true>(a, &out.U, &out.V);
  return out;
}

std::vector<Integer> smith_divisors(const IntegerMatrix& a) { return smith_impl<false>(a, nullptr, nullptr); }

// ---------------------------------------------------------------------------
// Cokernels

Integer CokernelStructure::torsion_order() const {
  Integer o = 1;
  for (const auto& e : torsion) o *= e;
  return o;
}

std::string CokernelStructure::label() const {
  std::string s = "[";
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (i) s += ',';
    s += to_string(torsion[i]);
  }
  return s + "]";
}

bool CokernelStructure::is_square_of_cyclic() const {
  return torsion.empty() || (torsion.size() == 2 && torsion[0] == torsion[1]);
}

CokernelStructure cokernel(const IntegerMatrix& a) {
  // coker of x -> A x on Z^cols has the same invariant factors as A.
  CokernelStructure c;
  std::size_t nonzero = 0;
  for (auto& d : smith_divisors(a)) {
    if (d == 0) continue;
    ++nonzero;
    if (d > 1) c.torsion.push_back(std::move(d));
  }
  c.free_rank = a.rows() - nonzero;
  return c;
}

CokernelStructure cokernel(const AlternatingMatrix& a) { return cokernel(a.to_full()); }

AbelianPGroup p_part(const CokernelStructure& c, std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p_part: " + std::to_string(p) + " is not prime");
  std::vector<unsigned> parts;
  for (const auto& e : c.torsion)
    if (mpz_divisible_ui_p(e.get_mpz_t(), static_cast<unsigned long>(p))) parts.push_back(valuation(e, p));
  return AbelianPGroup(p, std::move(parts));
}

AbelianPGroup cokernel_p_part(const AlternatingMatrix& a, std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("cokernel_p_part: " + std::to_string(p) + " is not prime");
  return p_part(cokernel(a), p);
}

bool has_paired_torsion(const CokernelStructure& c) {
  if (c.torsion.size() % 2) return false;
  for (std::size_t i = 0; i < c.torsion.size(); i += 2)
    if (c.torsion[i] != c.torsion[i + 1]) return false;
  return true;
}

}  // namespace altsha
