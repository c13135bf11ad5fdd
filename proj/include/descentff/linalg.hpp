/*
 * Copyright 2026 the descentff authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

// Dense linear algebra over a finite field: row reduction, rank, and
// null space bases. Sizes here stay in the hundreds, so a plain
// row-major Gaussian elimination is enough.

#ifndef DESCENTFF_LINALG_HPP
#define DESCENTFF_LINALG_HPP

#include <cstddef>
#include <vector>

#include "descentff/gf.hpp"

namespace descentff {

class FqMatrix {
 public:
  FqMatrix(const FieldCtx& F, size_t rows, size_t cols)
      : F_(&F), rows_(rows), cols_(cols), a_(rows * cols, FieldCtx::zero()) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const FieldCtx& field() const { return *F_; }

  Fq& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
  const Fq& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

  // In-place reduced row echelon form; returns the rank and records the
  // pivot column of each of the first rank rows.
  size_t rref(std::vector<size_t>* pivots = nullptr) {
    const FieldCtx& F = *F_;
    size_t rank = 0;
    if (pivots) pivots->clear();
    for (size_t col = 0; col < cols_ && rank < rows_; col++) {
      size_t piv = rank;
      while (piv < rows_ && at(piv, col).is_zero()) piv++;
      if (piv == rows_) continue;
      if (piv != rank)
        for (size_t c = col; c < cols_; c++) std::swap(at(piv, c), at(rank, c));
      Fq inv = F.inv(at(rank, col));
      for (size_t c = col; c < cols_; c++) at(rank, c) = F.mul(at(rank, c), inv);
      for (size_t r = 0; r < rows_; r++) {
        if (r == rank || at(r, col).is_zero()) continue;
        Fq m = at(r, col);
        for (size_t c = col; c < cols_; c++)
          at(r, c) = F.sub(at(r, c), F.mul(m, at(rank, c)));
      }
      if (pivots) pivots->push_back(col);
      rank++;
    }
    return rank;
  }

  size_t rank() const {
    FqMatrix copy = *this;
    return copy.rref();
  }

  // Basis of the right null space, each vector of length cols().
  std::vector<std::vector<Fq>> kernel_basis() const {
    const FieldCtx& F = *F_;
    FqMatrix m = *this;
    std::vector<size_t> pivots;
    size_t rank = m.rref(&pivots);
    std::vector<bool> is_pivot(cols_, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Fq>> basis;
    for (size_t free = 0; free < cols_; free++) {
      if (is_pivot[free]) continue;
      std::vector<Fq> v(cols_, FieldCtx::zero());
      v[free] = F.one();
      for (size_t r = 0; r < rank; r++)
        v[pivots[r]] = F.neg(m.at(r, free));
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  const FieldCtx* F_;
  size_t rows_, cols_;
  std::vector<Fq> a_;
};

}  // namespace descentff

#endif  // DESCENTFF_LINALG_HPP
